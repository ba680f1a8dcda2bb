#include "valsize/riley.hpp"

#include <cmath>
#include <vector>

#include "valsize/error.hpp"
#include "valsize/numeric.hpp"

namespace valsize {

namespace {

void require_prevalence(double phi) {
  if (!(phi > 0.0 && phi < 1.0)) {
    throw Error(ErrorCode::Degenerate, "prevalence must lie in (0, 1)");
  }
}

void require_se(double se) { require(se > 0.0 && std::isfinite(se), "target SE must be positive"); }

constexpr std::size_t kFisherChunk = 1 << 16;

}  // namespace

double oe_ciw_to_log_se(double ciw) {
  require(ciw > 0.0 && std::isfinite(ciw), "O/E CI width must be positive");
  return std::asinh(ciw / 2.0) / kZ;
}

SampleSizeResult n_oe(double prevalence, double target_se_log_oe) {
  require_prevalence(prevalence);
  require_se(target_se_log_oe);
  SampleSizeResult r;
  r.criterion = "oe";
  r.value = 1.0;
  r.target_se = target_se_log_oe;
  r.exact_n = (1 - prevalence) / (prevalence * target_se_log_oe * target_se_log_oe);
  r.n = ceil_n(r.exact_n);
  r.events = events_from_n(r.n, prevalence);
  r.achieved_se = std::sqrt((1 - prevalence) / (prevalence * static_cast<double>(r.n)));
  r.achieved_ciw = 2 * std::sinh(kZ * r.achieved_se);
  return r;
}

FisherInfo fisher_info(std::span<const double> lp, CalibrationAssumption assumption) {
  require(lp.size() >= 2, "fisher information needs at least two linear predictor values");
  const std::size_t chunks = (lp.size() + kFisherChunk - 1) / kFisherChunk;
  struct Partial {
    CompensatedSum a, b, c;
  };
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, [&](std::size_t k) {
    const std::size_t begin = k * kFisherChunk;
    const std::size_t end = std::min(lp.size(), begin + kFisherChunk);
    Partial& p = partial[k];
    for (std::size_t i = begin; i < end; ++i) {
      const double x = lp[i];
      require(std::isfinite(x), "linear predictor values must be finite");
      const double mu = expit(assumption.intercept + assumption.slope * x);
      const double a = mu * (1 - mu);
      p.a.add(a);
      p.b.add(x * a);
      p.c.add(x * x * a);
    }
  });
  CompensatedSum a, b, c;
  for (const Partial& p : partial) {
    a.add(p.a);
    b.add(p.b);
    c.add(p.c);
  }
  const double m = static_cast<double>(lp.size());
  return {a.value() / m, b.value() / m, c.value() / m};
}

SampleSizeResult n_calibration_slope(const FisherInfo& info, double target_se_slope,
                                     double prevalence) {
  require_se(target_se_slope);
  require_prevalence(prevalence);
  const double det = info.determinant();
  if (!(info.i_alpha > 0.0) || !(det > 0.0)) {
    throw Error(ErrorCode::Degenerate,
                "degenerate linear predictor: the Fisher information matrix is singular");
  }
  SampleSizeResult r;
  r.criterion = "calibration_slope";
  r.value = 1.0;
  r.target_se = target_se_slope;
  r.exact_n = info.i_alpha / (target_se_slope * target_se_slope * det);
  r.n = ceil_n(r.exact_n);
  r.events = events_from_n(r.n, prevalence);
  r.achieved_se = std::sqrt(info.i_alpha / (det * static_cast<double>(r.n)));
  r.achieved_ciw = 2 * kZ * r.achieved_se;
  return r;
}

double se_cstat(double c, double n, double prevalence) {
  require(c > 0.5 && c < 1.0, "c-statistic must lie in (0.5, 1)");
  require_prevalence(prevalence);
  require(n >= 2.0, "n must be at least 2");
  const double half = n / 2.0 - 1.0;
  const double num =
      c * (1 - c) * (1 + half * (1 - c) / (2 - c) + half * c / (1 + c));
  return std::sqrt(num / (n * n * prevalence * (1 - prevalence)));
}

SampleSizeResult n_cstat(double c, double prevalence, double target_se) {
  require(c > 0.5, "c-statistic must exceed 0.5; a criterion at or below chance is meaningless");
  require(c < 1.0, "c-statistic must be below 1");
  require_prevalence(prevalence);
  require_se(target_se);
  constexpr long kLow = 10;
  constexpr long kHigh = 10'000'000;
  auto ok = [&](long n) { return se_cstat(c, static_cast<double>(n), prevalence) <= target_se; };
  require(ok(kHigh), "c-statistic target SE is not reachable below 1e7 participants");
  long lo = kLow - 1;
  long hi = kHigh;
  if (ok(kLow)) {
    hi = kLow;
  } else {
    lo = kLow;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
  }
  SampleSizeResult r;
  r.criterion = "c_statistic";
  r.value = c;
  r.target_se = target_se;
  r.exact_n = static_cast<double>(hi);
  r.n = hi;
  r.events = events_from_n(hi, prevalence);
  r.achieved_se = se_cstat(c, static_cast<double>(hi), prevalence);
  r.achieved_ciw = 2 * kZ * r.achieved_se;
  return r;
}

double SNBInputs::weight() const {
  return (1 - prevalence) / prevalence * threshold / (1 - threshold);
}

double SNBInputs::snb() const { return sensitivity - weight() * (1 - specificity); }

SampleSizeResult n_snb(const SNBInputs& in, double target_se_snb) {
  require_prevalence(in.prevalence);
  require(in.threshold > 0.0 && in.threshold < 1.0, "threshold must lie in (0, 1)");
  require(in.sensitivity > 0.0 && in.sensitivity < 1.0, "sensitivity must lie in (0, 1)");
  require(in.specificity > 0.0 && in.specificity < 1.0, "specificity must lie in (0, 1)");
  require_se(target_se_snb);
  const double phi = in.prevalence;
  const double w = in.weight();
  const double sens = in.sensitivity;
  const double spec = in.specificity;
  const double unit_var = sens * (1 - sens) / phi + w * w * spec * (1 - spec) / (1 - phi) +
                          w * w * (1 - spec) * (1 - spec) / (phi * (1 - phi));
  SampleSizeResult r;
  r.criterion = "standardised_net_benefit";
  r.threshold = in.threshold;
  r.value = in.snb();
  r.target_se = target_se_snb;
  r.exact_n = unit_var / (target_se_snb * target_se_snb);
  r.n = ceil_n(r.exact_n);
  r.events = events_from_n(r.n, phi);
  r.achieved_se = std::sqrt(unit_var / static_cast<double>(r.n));
  r.achieved_ciw = 2 * kZ * r.achieved_se;
  return r;
}

}  // namespace valsize
