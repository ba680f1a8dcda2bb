#pragma once

#include <optional>

#include "valsize/measures.hpp"

namespace valsize {

/// Assumed true performance at one classification threshold.
struct PerformanceAnticipation {
  double threshold = 0.5;
  double prevalence = 0.5;
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> ppv;
  std::optional<double> npv;
  std::optional<double> f1;

  /// Throws if any supplied value is outside (0, 1), or if the supplied
  /// accuracy disagrees with sens * prevalence + spec * (1 - prevalence) by
  /// more than kAccuracyTolerance.
  void validate() const;

  std::optional<double> get(Measure m) const;

  /// Value for m; throws naming the missing field when absent.
  double value(Measure m) const;

  /// Fills missing accuracy, ppv, npv and f1 from sensitivity, specificity
  /// and prevalence (exact under the anticipated rates).
  PerformanceAnticipation completed() const;

  static constexpr double kAccuracyTolerance = 0.02;
};

}  // namespace valsize
