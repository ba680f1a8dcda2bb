#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "valsize/measures.hpp"

namespace valsize {

struct SurvivalRecord {
  double time = 0.0;
  bool event = false;
};

/// Product-limit survival curve. Events at a tied time are processed before
/// censorings at that time, so censored subjects count as at risk there.
class KMCurve {
 public:
  struct Step {
    double time;
    double survival;  // S(t) for t in [time, next step)
  };

  explicit KMCurve(std::span<const SurvivalRecord> records);

  double survival(double t) const;
  double cumulative_incidence(double t) const { return 1.0 - survival(t); }
  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<Step> steps_;
};

double km_cumulative_incidence(std::span<const SurvivalRecord> records, double horizon);

/// 1 - s0^exp(lp): risk by the horizon under proportional hazards.
double predicted_risk(double baseline_survival, double lp);

/// Jackknife pseudo-values of the cumulative incidence at the horizon,
/// N * F - (N - 1) * F(-i). Sorts once and updates the leave-one-out product
/// with prefix and suffix products: O(N log N).
std::vector<double> pseudo_observations(std::span<const SurvivalRecord> records,
                                        double horizon);

struct PseudoConfusion {
  ConfusionMatrix cm;
  int clamped_cells = 0;  // aggregate cells raised from below zero
};

/// Cells are sums of pseudo-values (events) and their complements
/// (non-events) on each side of the threshold.
PseudoConfusion pseudo_confusion(std::span<const double> pseudo, std::span<const double> risks,
                                 double threshold);

/// Event or censoring time model. The event model is the baseline of a
/// proportional hazards model: S0(t) = exp(-(t / scale)^shape).
struct Weibull {
  double shape = 1.0;
  double scale = 1.0;

  double survival(double t) const;
};

inline Weibull exponential_with_rate(double rate) { return {1.0, 1.0 / rate}; }

struct NormalLp {
  double mean = 0.0;
  double sd = 1.0;
};
struct EmpiricalLp {
  std::vector<double> values;
};
using LpDistribution = std::variant<NormalLp, EmpiricalLp>;

struct SurvivalScenario {
  double horizon = 1.0;
  LpDistribution lp = NormalLp{};
  Weibull event;                        // baseline event-time model
  std::optional<Weibull> censoring;     // random censoring, independent of LP
  std::optional<double> admin_censoring;  // fixed end of follow-up
  double threshold = 0.1;
  std::vector<std::size_t> sizes;
  std::size_t repetitions = 100;
  std::uint64_t seed = 0;

  void validate() const;
  double baseline_survival() const { return event.survival(horizon); }
};

/// Moderately censored scenario with roughly 10% risk by three years.
SurvivalScenario builtin_survival_scenario();

struct RepetitionResult {
  std::size_t n = 0;
  std::size_t repetition = 0;
  bool degenerate = false;
  int clamped_cells = 0;
  double observed_events = 0.0;  // events with time <= horizon
  ConfusionMatrix cm;
  std::array<MeasureEstimate, 6> estimates{};
};

struct SizeSummary {
  std::size_t n = 0;
  std::size_t completed = 0;
  std::size_t degenerate = 0;
  std::size_t clamp_events = 0;
  double mean_observed_events = 0.0;
  std::array<double, 6> mean_estimate{};
  std::array<double, 6> mean_ci_low{};
  std::array<double, 6> mean_ci_high{};
  std::array<double, 6> mean_width{};  // unclamped 2 * z * se
};

struct SurvivalReport {
  std::vector<SizeSummary> sizes;
  std::vector<RepetitionResult> raw;  // only when requested
};

/// One repetition: simulate n individuals and estimate all six measures from
/// the pseudo-observation confusion matrix.
RepetitionResult simulate_repetition(const SurvivalScenario& s, std::size_t size_index,
                                     std::size_t repetition);

/// Mean estimates and interval widths per candidate size. Repetitions run in
/// parallel on substreams derived from (seed, size index, repetition) and are
/// reduced in a fixed order, so output depends only on the scenario.
SurvivalReport simulate_ciw(const SurvivalScenario& s, bool keep_raw = false);

}  // namespace valsize
