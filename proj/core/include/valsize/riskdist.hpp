#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "valsize/anticipation.hpp"

namespace valsize {

struct BetaDist {
  double a = 1.0;
  double b = 1.0;

  double mean() const { return a / (a + b); }
  double variance() const { return a * b / ((a + b) * (a + b) * (a + b + 1)); }
};

/// Predicted probabilities resampled with replacement.
struct EmpiricalDist {
  std::vector<double> probs;
};

using RiskDistribution = std::variant<BetaDist, EmpiricalDist>;

void validate(const RiskDistribution& dist);

inline constexpr std::size_t kDefaultCohortSize = 1'000'000;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Probabilities drawn from a risk distribution with outcomes drawn as
/// Bernoulli(prob), so the cohort is perfectly calibrated.
struct SimulatedCohort {
  std::vector<double> probs;
  std::vector<int> outcomes;
  std::uint64_t seed = 0;

  std::size_t size() const { return probs.size(); }
  double prevalence() const;
};

/// Deterministic in (dist, m, seed) regardless of thread count: observation i
/// belongs to chunk i / 65536, and each chunk draws from its own substream.
SimulatedCohort sample_cohort(const RiskDistribution& dist, std::size_t m, std::uint64_t seed);

/// "True" performance at a threshold, measured on the cohort (unrounded).
PerformanceAnticipation anticipated_measures(const SimulatedCohort& cohort, double threshold);

/// Elementwise logit; every probability must lie strictly inside (0, 1).
std::vector<double> lp_samples(std::span<const double> probs);

/// One probability per line; blank lines and lines starting with '#' are skipped.
std::vector<double> read_probabilities(std::istream& in);

}  // namespace valsize
