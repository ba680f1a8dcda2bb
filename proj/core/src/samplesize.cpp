#include "valsize/samplesize.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "valsize/error.hpp"

namespace valsize {

namespace {

void require_rate(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::Degenerate,
                std::string(name) + " must lie in the open interval (0, 1); values of 0 or 1 "
                                    "carry infinite or zero information");
  }
}

void require_se(double se) { require(se > 0.0 && std::isfinite(se), "target SE must be positive"); }

SampleSizeResult finish(Measure kind, double value, double prevalence, double target_se,
                        double exact, const PerformanceAnticipation& a) {
  SampleSizeResult r;
  r.criterion = std::string(to_string(kind));
  r.value = value;
  r.target_se = target_se;
  r.exact_n = exact;
  r.n = ceil_n(exact);
  r.events = events_from_n(r.n, prevalence);
  r.achieved_se = measure_se(kind, a, static_cast<double>(r.n));
  r.achieved_ciw = 2 * kZ * r.achieved_se;
  return r;
}

PerformanceAnticipation anticipation(double prevalence) {
  PerformanceAnticipation a;
  a.prevalence = prevalence;
  return a;
}

// Total size to denominator of the proportion, per measure.
double implied_denominator(Measure kind, const PerformanceAnticipation& a, double n) {
  const double phi = a.prevalence;
  switch (kind) {
    case Measure::Accuracy: return n;
    case Measure::Specificity: return n * (1 - phi);
    case Measure::Sensitivity: return n * phi;
    case Measure::PPV: return n * phi * a.value(Measure::Sensitivity) / a.value(Measure::PPV);
    case Measure::NPV:
      return n * (a.value(Measure::Specificity) * (1 - phi) +
                  phi * (1 - a.value(Measure::Sensitivity)));
    case Measure::F1: break;
  }
  throw Error(ErrorCode::InvalidArgument, "agresti-coull applies to proportion measures only");
}

}  // namespace

void PrecisionTarget::validate() const {
  require(magnitude > 0.0 && std::isfinite(magnitude), "precision target must be positive");
  if (mode == TargetMode::CIW) require(magnitude <= 1.0, "target CI width must not exceed 1");
}

double PrecisionTarget::se() const {
  validate();
  return mode == TargetMode::SE ? magnitude : ciw_to_se(magnitude);
}

double PrecisionTarget::ciw() const {
  validate();
  return mode == TargetMode::CIW ? magnitude : 2 * kZ * magnitude;
}

double ciw_to_se(double ciw) {
  require(ciw > 0.0, "CI width must be positive");
  require(ciw <= 1.0, "CI width must not exceed 1");
  return ciw / (2 * kZ);
}

long events_from_n(long n, double prevalence) {
  return ceil_n(static_cast<double>(n) * prevalence);
}

long ceil_n(double x) {
  require(std::isfinite(x) && x >= 0.0, "sample size is not finite");
  const double c = std::ceil(x * (1.0 - 1e-12));
  return std::max(1L, static_cast<long>(c));
}

SampleSizeResult n_accuracy(double accuracy, double prevalence, double target_se) {
  require_rate(accuracy, "accuracy");
  require_rate(prevalence, "prevalence");
  require_se(target_se);
  auto a = anticipation(prevalence);
  a.accuracy = accuracy;
  const double exact = accuracy * (1 - accuracy) / (target_se * target_se);
  return finish(Measure::Accuracy, accuracy, prevalence, target_se, exact, a);
}

SampleSizeResult n_specificity(double specificity, double prevalence, double target_se) {
  require_rate(specificity, "specificity");
  require_rate(prevalence, "prevalence");
  require_se(target_se);
  auto a = anticipation(prevalence);
  a.specificity = specificity;
  const double exact =
      specificity * (1 - specificity) / (target_se * target_se * (1 - prevalence));
  return finish(Measure::Specificity, specificity, prevalence, target_se, exact, a);
}

SampleSizeResult n_sensitivity(double sensitivity, double prevalence, double target_se) {
  require_rate(sensitivity, "sensitivity");
  require_rate(prevalence, "prevalence");
  require_se(target_se);
  auto a = anticipation(prevalence);
  a.sensitivity = sensitivity;
  const double exact = sensitivity * (1 - sensitivity) / (prevalence * target_se * target_se);
  return finish(Measure::Sensitivity, sensitivity, prevalence, target_se, exact, a);
}

SampleSizeResult n_ppv(double ppv, double sensitivity, double prevalence, double target_se) {
  require_rate(ppv, "ppv");
  require_rate(sensitivity, "sensitivity");
  require_rate(prevalence, "prevalence");
  require_se(target_se);
  auto a = anticipation(prevalence);
  a.ppv = ppv;
  a.sensitivity = sensitivity;
  const double exact =
      ppv * ppv * (1 - ppv) / (target_se * target_se * prevalence * sensitivity);
  return finish(Measure::PPV, ppv, prevalence, target_se, exact, a);
}

SampleSizeResult n_npv(double npv, double sensitivity, double specificity, double prevalence,
                       double target_se) {
  require_rate(npv, "npv");
  require_rate(sensitivity, "sensitivity");
  require_rate(specificity, "specificity");
  require_rate(prevalence, "prevalence");
  require_se(target_se);
  auto a = anticipation(prevalence);
  a.npv = npv;
  a.sensitivity = sensitivity;
  a.specificity = specificity;
  const double negatives = specificity * (1 - prevalence) + prevalence * (1 - sensitivity);
  const double exact = npv * (1 - npv) / (target_se * target_se * negatives);
  return finish(Measure::NPV, npv, prevalence, target_se, exact, a);
}

SampleSizeResult n_f1(double ppv, double sensitivity, double specificity, double prevalence,
                      double target_se_f1, double target_se_precision,
                      double target_se_recall) {
  require_rate(ppv, "ppv");
  require_rate(sensitivity, "sensitivity");
  require_rate(specificity, "specificity");
  require_rate(prevalence, "prevalence");
  require_se(target_se_f1);
  require_se(target_se_precision);
  require_se(target_se_recall);
  const double p = ppv;
  const double r = sensitivity;
  const double s4 = std::pow(p + r, 4);
  const double denom = target_se_f1 * target_se_f1 * s4 / 4.0 -
                       std::pow(r, 4) * target_se_precision * target_se_precision -
                       std::pow(p, 4) * target_se_recall * target_se_recall;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::InconsistentTargets,
                "inconsistent precision targets for f1: the precision and recall targets "
                "alone already imply an F1 interval wider than the F1 target");
  }
  // n * cov(P, R) does not depend on n.
  const double n_cov = cov_precision_recall(p, r, specificity, prevalence, 1.0);
  const double exact = 2.0 * p * p * r * r * n_cov / denom;

  SampleSizeResult res;
  res.criterion = "f1";
  res.value = 2 * p * r / (p + r);
  res.target_se = target_se_f1;
  res.exact_n = exact;
  res.n = ceil_n(exact);
  res.events = events_from_n(res.n, prevalence);
  res.achieved_se = f1_se(p, r, target_se_precision, target_se_recall,
                          n_cov / static_cast<double>(res.n));
  res.achieved_ciw = 2 * kZ * res.achieved_se;
  return res;
}

SampleSizeResult solve_wald(const PerformanceAnticipation& a, const PrecisionTarget& target) {
  a.validate();
  const double se = target.se();
  const double phi = a.prevalence;
  SampleSizeResult r;
  switch (target.kind) {
    case Measure::Accuracy:
      r = n_accuracy(a.value(Measure::Accuracy), phi, se);
      break;
    case Measure::Specificity:
      r = n_specificity(a.value(Measure::Specificity), phi, se);
      break;
    case Measure::Sensitivity:
      r = n_sensitivity(a.value(Measure::Sensitivity), phi, se);
      break;
    case Measure::PPV:
      r = n_ppv(a.value(Measure::PPV), a.value(Measure::Sensitivity), phi, se);
      break;
    case Measure::NPV:
      r = n_npv(a.value(Measure::NPV), a.value(Measure::Sensitivity),
                a.value(Measure::Specificity), phi, se);
      break;
    case Measure::F1:
      r = n_f1(a.value(Measure::PPV), a.value(Measure::Sensitivity),
               a.value(Measure::Specificity), phi, se, se, se);
      if (a.f1) r.value = *a.f1;
      break;
  }
  r.threshold = a.threshold;
  return r;
}

double agresti_coull_width_at(Measure kind, const PerformanceAnticipation& a, long n) {
  const double trials = std::round(implied_denominator(kind, a, static_cast<double>(n)));
  if (trials < 1.0) return std::numeric_limits<double>::infinity();
  const double successes = std::round(a.value(kind) * trials);
  return agresti_coull_interval(successes, trials).raw_width;
}

SampleSizeResult n_iterative_agresti_coull(Measure kind, const PerformanceAnticipation& a,
                                           double target_ciw) {
  require(kind != Measure::F1, "agresti-coull sizing applies to proportion measures, not f1");
  require(target_ciw > 0.0 && target_ciw < 1.0, "target CI width must lie in (0, 1)");
  a.validate();
  require_rate(a.value(kind), std::string(to_string(kind)).c_str());
  require_rate(a.prevalence, "prevalence");

  auto ok = [&](long n) { return agresti_coull_width_at(kind, a, n) <= target_ciw; };

  constexpr long kMaxN = 1L << 40;
  long hi = 1;
  while (!ok(hi)) {
    require(hi < kMaxN, "agresti-coull search did not converge");
    hi *= 2;
  }
  long lo = hi / 2;  // ok(lo) is false, or lo == 0
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  // Integer rounding of the implied counts can make the width non-monotone.
  long best = hi;
  for (long n = std::max(1L, hi - 5); n < hi; ++n) {
    if (ok(n)) {
      best = n;
      break;
    }
  }

  SampleSizeResult r;
  r.criterion = std::string(to_string(kind));
  r.threshold = a.threshold;
  r.value = a.value(kind);
  r.target_se = ciw_to_se(target_ciw);
  r.exact_n = static_cast<double>(best);
  r.n = best;
  r.events = events_from_n(best, a.prevalence);
  r.achieved_ciw = agresti_coull_width_at(kind, a, best);
  r.achieved_se = r.achieved_ciw / (2 * kZ);
  return r;
}

MeasureEstimate ciw_at_n(Measure kind, const PerformanceAnticipation& a, long n,
                         IntervalMethod method) {
  require(n >= 1, "n must be at least 1");
  a.validate();
  MeasureEstimate e;
  e.kind = kind;
  e.value = a.value(kind);
  e.se = measure_se(kind, a, static_cast<double>(n));
  if (method == IntervalMethod::AgrestiCoull && kind != Measure::F1) {
    const double trials = std::round(implied_denominator(kind, a, static_cast<double>(n)));
    require(trials >= 1.0, "implied denominator for " + std::string(to_string(kind)) +
                               " rounds to zero at this sample size");
    const double successes = std::round(e.value * trials);
    e.ci = agresti_coull_interval(successes, trials);
    e.method = IntervalMethod::AgrestiCoull;
  } else {
    e.ci = wald_interval(e.value, e.se);
    e.method = IntervalMethod::Wald;
  }
  return e;
}

}  // namespace valsize
