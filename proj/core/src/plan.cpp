#include "valsize/plan.hpp"

#include <algorithm>
#include <cstdio>

#include "valsize/error.hpp"

namespace valsize {

namespace {

std::string format_threshold(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

template <class F>
SampleSizeResult labelled(const std::string& label, F&& solve) {
  try {
    return solve();
  } catch (const Error& e) {
    throw Error(e.code(), label + ": " + e.what());
  }
}

}  // namespace

std::string criterion_label(const SampleSizeResult& r) {
  if (r.threshold) return r.criterion + " @ " + format_threshold(*r.threshold);
  return r.criterion;
}

SampleSizePlan plan_binary(std::span<const PerformanceAnticipation> anticipations,
                           std::span<const PrecisionTarget> targets,
                           const std::optional<RileyInputs>& riley, IntervalMethod method) {
  const bool any_riley = riley && (riley->oe_target_se || riley->slope_target_se ||
                                   riley->cstat_target_se || riley->snb_target_se);
  require(!targets.empty() || any_riley, "plan needs at least one precision target");
  require(!targets.empty() ? !anticipations.empty() : true,
          "threshold targets need at least one anticipated performance");

  SampleSizePlan plan;
  for (const PerformanceAnticipation& a : anticipations) {
    for (const PrecisionTarget& t : targets) {
      const std::string label =
          std::string(to_string(t.kind)) + " @ " + format_threshold(a.threshold);
      plan.criteria.push_back(labelled(label, [&] {
        if (method == IntervalMethod::AgrestiCoull && t.kind != Measure::F1) {
          return n_iterative_agresti_coull(t.kind, a, t.ciw());
        }
        return solve_wald(a, t);
      }));
    }
  }

  if (riley) {
    const RileyInputs& r = *riley;
    if (r.oe_target_se) {
      plan.criteria.push_back(labelled("oe", [&] { return n_oe(r.prevalence, *r.oe_target_se); }));
    }
    if (r.slope_target_se) {
      plan.criteria.push_back(labelled("calibration_slope", [&] {
        require(r.fisher.has_value(), "calibration slope needs a linear predictor distribution");
        return n_calibration_slope(*r.fisher, *r.slope_target_se, r.prevalence);
      }));
    }
    if (r.cstat_target_se) {
      plan.criteria.push_back(labelled("c_statistic", [&] {
        require(r.cstatistic.has_value(), "c-statistic criterion needs an anticipated c");
        return n_cstat(*r.cstatistic, r.prevalence, *r.cstat_target_se);
      }));
    }
    if (r.snb_target_se) {
      for (const PerformanceAnticipation& a : anticipations) {
        plan.criteria.push_back(labelled(
            "standardised_net_benefit @ " + format_threshold(a.threshold), [&] {
              SNBInputs in{a.threshold, r.prevalence, a.value(Measure::Sensitivity),
                           a.value(Measure::Specificity)};
              return n_snb(in, *r.snb_target_se);
            }));
      }
    }
  }

  for (const SampleSizeResult& c : plan.criteria) plan.n = std::max(plan.n, c.n);
  for (const SampleSizeResult& c : plan.criteria) {
    if (c.n == plan.n) plan.binding.push_back(criterion_label(c));
  }
  plan.prevalence = any_riley ? riley->prevalence : anticipations.front().prevalence;
  plan.events = events_from_n(plan.n, plan.prevalence);
  return plan;
}

}  // namespace valsize
