#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valsize/riley.hpp"
#include "valsize/samplesize.hpp"

namespace valsize {

/// Inputs for the calibration, discrimination and net-benefit criteria. Each
/// criterion is included only when its target is present.
struct RileyInputs {
  double prevalence = 0.5;

  std::optional<double> oe_target_se;  // on the ln(O/E) scale

  std::optional<FisherInfo> fisher;
  std::optional<double> slope_target_se;

  std::optional<double> cstatistic;
  std::optional<double> cstat_target_se;

  // Applied at every anticipated threshold, using its sensitivity and specificity.
  std::optional<double> snb_target_se;
};

struct SampleSizePlan {
  std::vector<SampleSizeResult> criteria;
  long n = 0;
  long events = 0;
  double prevalence = 0.0;
  std::vector<std::string> binding;  // labels of every criterion attaining n

  friend bool operator==(const SampleSizePlan&, const SampleSizePlan&) = default;
};

/// "npv @ 0.1" for threshold criteria, the bare criterion name otherwise.
std::string criterion_label(const SampleSizeResult& r);

/// Solves every (threshold, target) pair plus the supplied Riley criteria and
/// reports the overall maximum. Failures are rethrown with the criterion label
/// prefixed. Overall events use the Riley prevalence when Riley criteria are
/// present, otherwise the first anticipation's prevalence.
SampleSizePlan plan_binary(std::span<const PerformanceAnticipation> anticipations,
                           std::span<const PrecisionTarget> targets,
                           const std::optional<RileyInputs>& riley = std::nullopt,
                           IntervalMethod method = IntervalMethod::Wald);

}  // namespace valsize
