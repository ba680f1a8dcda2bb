#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace valsize {

/// Two-sided 95% normal quantile used for every interval in the library.
inline constexpr double kZ = 1.96;

enum class Measure { Accuracy, Specificity, Sensitivity, PPV, NPV, F1 };

inline constexpr std::array<Measure, 6> kAllMeasures = {
    Measure::Accuracy, Measure::Specificity, Measure::Sensitivity,
    Measure::PPV,      Measure::NPV,         Measure::F1};

// The five measures that are simple proportions of confusion-matrix cells.
inline constexpr std::array<Measure, 5> kProportionMeasures = {
    Measure::Accuracy, Measure::Specificity, Measure::Sensitivity,
    Measure::PPV, Measure::NPV};

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view name);

/// Classification counts at one threshold. Cells are real-valued so the same
/// code serves pseudo-observation sums; with binary outcomes they are integers.
struct ConfusionMatrix {
  double tp = 0.0;
  double fp = 0.0;
  double tn = 0.0;
  double fn = 0.0;

  double n() const { return tp + fp + tn + fn; }
  double prevalence() const;
};

/// Positive means prob > threshold; a probability equal to the threshold is
/// classified negative.
ConfusionMatrix build_confusion(std::span<const double> probs,
                                std::span<const int> outcomes, double threshold);

/// Point estimate. Throws ErrorCode::UndefinedMeasure when the denominator is 0.
double measure_value(const ConfusionMatrix& cm, Measure kind);

/// Numerator and denominator of a proportion-type measure.
struct Proportion {
  double successes;
  double trials;
};
Proportion measure_proportion(const ConfusionMatrix& cm, Measure kind);

enum class IntervalMethod { Wald, AgrestiCoull };
std::string_view to_string(IntervalMethod m);
std::optional<IntervalMethod> parse_interval_method(std::string_view name);

struct Interval {
  double center = 0.0;
  double low = 0.0;   // clamped to [0, 1]
  double high = 0.0;  // clamped to [0, 1]
  double raw_width = 0.0;  // 2 * z * se before clamping

  double width() const { return high - low; }
};

Interval wald_interval(double value, double se);

/// Adds two successes and two failures for the center; the half-width divides
/// by the unadjusted number of trials.
Interval agresti_coull_interval(double successes, double trials);

struct MeasureEstimate {
  Measure kind = Measure::Accuracy;
  double value = 0.0;
  double se = 0.0;
  Interval ci;
  IntervalMethod method = IntervalMethod::Wald;
};

/// cov(P, R) from cell counts.
double cov_precision_recall(const ConfusionMatrix& cm);

/// cov(P, R) from rates; equals the cell-count form divided through by n.
double cov_precision_recall(double precision, double recall, double specificity,
                            double prevalence, double n);

/// Delta-method SE of the harmonic mean of precision and recall.
double f1_se(double precision, double recall, double se_precision,
             double se_recall, double cov);

/// Estimate with SE from the observed cell counts. Agresti-Coull applies to
/// the proportion measures; F1 always uses the Wald form.
MeasureEstimate estimate(const ConfusionMatrix& cm, Measure kind,
                         IntervalMethod method = IntervalMethod::Wald);

std::array<MeasureEstimate, 6> estimate_all(const ConfusionMatrix& cm,
                                            IntervalMethod method = IntervalMethod::Wald);

struct PerformanceAnticipation;

/// Large-sample SE at total sample size n from anticipated values, with the
/// measure's denominator expanded through the prevalence.
double measure_se(Measure kind, const PerformanceAnticipation& a, double n);

}  // namespace valsize
