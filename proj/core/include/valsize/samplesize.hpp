#pragma once

#include <optional>
#include <string>

#include "valsize/anticipation.hpp"
#include "valsize/measures.hpp"

namespace valsize {

enum class TargetMode { SE, CIW };

struct PrecisionTarget {
  Measure kind = Measure::Accuracy;
  TargetMode mode = TargetMode::CIW;
  double magnitude = 0.1;

  void validate() const;
  double se() const;
  double ciw() const;
};

struct SampleSizeResult {
  std::string criterion;  // e.g. "npv", "calibration_slope"
  std::optional<double> threshold;
  double value = 0.0;        // anticipated value of the criterion's statistic
  double target_se = 0.0;
  double exact_n = 0.0;      // real-valued solution before rounding up
  long n = 0;
  long events = 0;
  double achieved_se = 0.0;  // SE recomputed at integer n
  double achieved_ciw = 0.0;

  friend bool operator==(const SampleSizeResult&, const SampleSizeResult&) = default;
};

/// SE implied by a symmetric Wald interval of the given width.
double ciw_to_se(double ciw);

/// ceil(n * prevalence).
long events_from_n(long n, double prevalence);

/// Smallest integer not below x, ignoring relative rounding noise of 1e-12
/// so that e.g. 99.99999999999997 maps to 100.
long ceil_n(double x);

SampleSizeResult n_accuracy(double accuracy, double prevalence, double target_se);
SampleSizeResult n_specificity(double specificity, double prevalence, double target_se);
SampleSizeResult n_sensitivity(double sensitivity, double prevalence, double target_se);
SampleSizeResult n_ppv(double ppv, double sensitivity, double prevalence, double target_se);
SampleSizeResult n_npv(double npv, double sensitivity, double specificity,
                       double prevalence, double target_se);

/// F1 solver. se_precision and se_recall are the precision and recall targets
/// the F1 target is coupled to; the denominator must be positive.
SampleSizeResult n_f1(double ppv, double sensitivity, double specificity,
                      double prevalence, double target_se_f1, double target_se_precision,
                      double target_se_recall);

/// Dispatches to the closed-form solver for target.kind. F1 targets couple
/// the precision and recall targets to the F1 target.
SampleSizeResult solve_wald(const PerformanceAnticipation& a, const PrecisionTarget& target);

/// Agresti-Coull width at total size n, using the measure's implied integer
/// counts. Infinite if the implied denominator rounds to zero.
double agresti_coull_width_at(Measure kind, const PerformanceAnticipation& a, long n);

/// Smallest n whose Agresti-Coull width is at most target_ciw. Proportion
/// measures only.
SampleSizeResult n_iterative_agresti_coull(Measure kind, const PerformanceAnticipation& a,
                                           double target_ciw);

/// Expected interval at a fixed total sample size.
MeasureEstimate ciw_at_n(Measure kind, const PerformanceAnticipation& a, long n,
                         IntervalMethod method);

}  // namespace valsize
