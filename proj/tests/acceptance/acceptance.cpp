// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Tolerances are fixed here and are not tuned to the results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "valsize/valsize.hpp"

using namespace valsize;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check, double limit_s) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += "; runtime over limit";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

constexpr double kPrevalence = 0.43;
constexpr double kWidths[3] = {0.08, 0.1, 0.12};

struct ReferenceRow {
  Measure m;
  double threshold;
  double value;
  long n[3];
  long events[3];
};

// Reference values and sizes at CI widths 0.08, 0.1, 0.12.
const std::vector<ReferenceRow> kThresholdRef = {
    {Measure::Accuracy, 0.1, 0.51, {601, 385, 267}, {259, 166, 115}},
    {Measure::Accuracy, 0.3, 0.663, {537, 344, 239}, {231, 148, 103}},
    {Measure::Specificity, 0.1, 0.147, {529, 338, 235}, {228, 146, 102}},
    {Measure::Specificity, 0.3, 0.508, {1054, 675, 469}, {454, 291, 202}},
    {Measure::Sensitivity, 0.1, 0.988, {65, 42, 29}, {28, 19, 13}},
    {Measure::Sensitivity, 0.3, 0.867, {644, 413, 287}, {277, 178, 124}},
    {Measure::PPV, 0.1, 0.468, {660, 423, 294}, {284, 182, 127}},
    {Measure::PPV, 0.3, 0.573, {904, 579, 402}, {389, 249, 173}},
    {Measure::NPV, 0.1, 0.943, {1457, 933, 648}, {627, 402, 279}},
    {Measure::NPV, 0.3, 0.834, {959, 614, 426}, {413, 265, 184}},
    {Measure::F1, 0.1, 0.636, {592, 379, 263}, {255, 163, 114}},
    {Measure::F1, 0.3, 0.690, {868, 555, 386}, {374, 239, 166}},
};

PerformanceAnticipation reference_anticipation(double threshold) {
  PerformanceAnticipation a;
  a.threshold = threshold;
  a.prevalence = kPrevalence;
  for (const auto& r : kThresholdRef) {
    if (r.threshold != threshold) continue;
    switch (r.m) {
      case Measure::Accuracy: a.accuracy = r.value; break;
      case Measure::Specificity: a.specificity = r.value; break;
      case Measure::Sensitivity: a.sensitivity = r.value; break;
      case Measure::PPV: a.ppv = r.value; break;
      case Measure::NPV: a.npv = r.value; break;
      case Measure::F1: a.f1 = r.value; break;
    }
  }
  return a;
}

Outcome threshold_golden() {
  Outcome o;
  int within = 0, events_ok = 0, events_checked = 0;
  long worst = 0;
  std::string worst_label;
  for (const auto& row : kThresholdRef) {
    const auto a = reference_anticipation(row.threshold);
    for (int k = 0; k < 3; ++k) {
      const auto r = solve_wald(a, {row.m, TargetMode::CIW, kWidths[k]});
      const long diff = std::abs(r.n - row.n[k]);
      if (diff <= 5) ++within;
      if (diff > worst) {
        worst = diff;
        worst_label = std::string(to_string(row.m)) + fmt("@%.1f CIW %.2f: %.0f vs %.0f", row.threshold,
                                                          kWidths[k], double(r.n), double(row.n[k]));
      }
      // event rule, on rows where the reference events follow it
      if (row.events[k] == events_from_n(row.n[k], kPrevalence)) {
        ++events_checked;
        if (r.events == events_from_n(r.n, kPrevalence)) ++events_ok;
      }
    }
  }
  const bool verified = events_from_n(385, kPrevalence) == 166 && events_from_n(338, kPrevalence) == 146 &&
                        events_from_n(42, kPrevalence) == 19 && events_from_n(933, kPrevalence) == 402;
  o.pass = within == 36 && events_ok == events_checked && verified;
  o.detail = fmt("%.0f/36 N within +-5, events rule %.0f/%.0f", within, events_ok, events_checked) +
             "; largest gap " + worst_label;
  return o;
}

Outcome cohort_pipeline() {
  const auto cohort = sample_cohort(BetaDist{1.33, 1.75}, 1'000'000, kDefaultSeed);
  double worst_value = 0, worst_n = 0;
  std::string worst_label;
  for (double t : {0.1, 0.3}) {
    const auto a = anticipated_measures(cohort, t);
    for (const auto& row : kThresholdRef) {
      if (row.threshold != t) continue;
      worst_value = std::max(worst_value, std::abs(a.value(row.m) - row.value));
      const auto r = solve_wald(a, {row.m, TargetMode::CIW, 0.1});
      const double gap = std::abs(double(r.n - row.n[1]));
      if (gap > worst_n) {
        worst_n = gap;
        worst_label = std::string(to_string(row.m)) +
                      fmt("@%.1f: %.0f vs %.0f", t, double(r.n), double(row.n[1]));
      }
    }
  }
  Outcome o;
  o.pass = worst_value <= 0.005 && worst_n <= 5;
  o.detail = fmt("seed %.0f, max value gap %.4f, max N gap %.0f", double(kDefaultSeed), worst_value, worst_n) +
             " (" + worst_label + ")";
  return o;
}

Outcome criteria_golden() {
  std::string detail;
  bool pass = true;

  const auto oe = n_oe(kPrevalence, oe_ciw_to_log_se(0.22));
  pass = pass && oe.n == 423;
  detail += fmt("O/E %.0f", double(oe.n));

  const double cse = ciw_to_se(0.1);
  const auto cs = n_cstat(0.77, kPrevalence, cse);
  const bool minimal = se_cstat(0.77, 346, kPrevalence) > cse && se_cstat(0.77, 347, kPrevalence) <= cse;
  pass = pass && cs.n == 347 && minimal;
  detail += fmt(", c %.0f%s", double(cs.n)) + (minimal ? "" : " (not minimal)");

  const auto cohort = sample_cohort(BetaDist{1.33, 1.75}, 1'000'000, kDefaultSeed);
  const long snb_target[2] = {38, 407};
  const double thresholds[2] = {0.1, 0.3};
  for (int k = 0; k < 2; ++k) {
    const auto a = anticipated_measures(cohort, thresholds[k]);
    const auto r = n_snb({thresholds[k], kPrevalence, *a.sensitivity, *a.specificity}, ciw_to_se(0.2));
    pass = pass && std::abs(r.n - snb_target[k]) <= 2;
    detail += fmt(", sNB@%.1f %.0f (want %.0f)", thresholds[k], double(r.n), double(snb_target[k]));
  }

  double lo = 1e9, hi = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto c = s == 0 ? cohort : sample_cohort(BetaDist{1.33, 1.75}, 1'000'000, kDefaultSeed + s);
    const auto r = n_calibration_slope(fisher_info(lp_samples(c.probs)), ciw_to_se(0.3), kPrevalence);
    lo = std::min(lo, double(r.n));
    hi = std::max(hi, double(r.n));
  }
  pass = pass && std::abs(lo - 949) <= 0.02 * 949 && std::abs(hi - 949) <= 0.02 * 949;
  detail += fmt(", slope %.0f..%.0f over 5 seeds", lo, hi);
  return {pass, detail};
}

Outcome agresti_coull_suite() {
  const auto a = reference_anticipation(0.1);
  const long want[5] = {384, 339, 42, 420, 935};
  bool pass = true;
  std::string detail;
  for (int k = 0; k < 5; ++k) {
    const Measure m = kProportionMeasures[k];
    const auto r = n_iterative_agresti_coull(m, a, 0.1);
    const bool ok = std::abs(r.n - want[k]) <= 2;
    pass = pass && ok;
    detail += (k ? ", " : "") + std::string(to_string(m)) +
              fmt(" %.0f/%.0f", double(r.n), double(want[k])) + (ok ? "" : "*");
  }
  return {pass, detail + " (got/reference)"};
}

Outcome inverse_at_949() {
  struct Row {
    Measure m;
    double low[2], high[2];
  };
  const std::vector<Row> rows = {
      {Measure::Accuracy, {0.478, 0.636}, {0.542, 0.693}},
      {Measure::Specificity, {0.117, 0.466}, {0.177, 0.550}},
      {Measure::Sensitivity, {0.977, 0.834}, {0.999, 0.900}},
      {Measure::PPV, {0.435, 0.534}, {0.501, 0.612}},
      {Measure::NPV, {0.894, 0.794}, {0.992, 0.874}},
      {Measure::F1, {0.603, 0.652}, {0.668, 0.728}},
  };
  double worst = 0, widest = 0;
  std::string worst_label;
  for (int k = 0; k < 2; ++k) {
    const auto a = reference_anticipation(k == 0 ? 0.1 : 0.3);
    for (const Row& row : rows) {
      const auto e = ciw_at_n(row.m, a, 949, IntervalMethod::Wald);
      widest = std::max(widest, e.ci.width());
      for (const auto& [got, want, side] :
           {std::tuple{e.ci.low, row.low[k], "low"}, std::tuple{e.ci.high, row.high[k], "high"}}) {
        const double gap = std::abs(got - want);
        if (gap > worst) {
          worst = gap;
          worst_label = std::string(to_string(row.m)) + fmt("@%.1f ", k == 0 ? 0.1 : 0.3) + side +
                        fmt(" %.4f vs %.3f", got, want);
        }
      }
    }
  }
  return {worst <= 0.003 && widest < 0.1,
          fmt("max bound gap %.4f (", worst) + worst_label + fmt("), widest CI %.4f", widest)};
}

Outcome bootstrap_oracle() {
  const auto c = oracle::synthetic_cohort(2000, 8675309);
  const double threshold = 0.35;
  const auto sd = oracle::bootstrap_sd(c, threshold, 5000, 424242);
  const ConfusionMatrix cm = build_confusion(c.probs, c.outcomes, threshold);
  PerformanceAnticipation a;
  a.threshold = threshold;
  a.prevalence = cm.prevalence();
  a.accuracy = measure_value(cm, Measure::Accuracy);
  a.sensitivity = measure_value(cm, Measure::Sensitivity);
  a.specificity = measure_value(cm, Measure::Specificity);
  a.ppv = measure_value(cm, Measure::PPV);
  a.npv = measure_value(cm, Measure::NPV);
  a.f1 = measure_value(cm, Measure::F1);
  bool pass = true;
  std::string detail = "relative gaps";
  for (std::size_t m = 0; m < 6; ++m) {
    const double se = measure_se(kAllMeasures[m], a, 2000);
    const double rel = std::abs(sd[m] - se) / se;
    pass = pass && rel <= (kAllMeasures[m] == Measure::F1 ? 0.15 : 0.10);
    detail += (m ? ", " : " ") + std::string(to_string(kAllMeasures[m])) + fmt(" %.3f", rel);
  }
  return {pass, detail};
}

Outcome pseudo_suite() {
  double mean_gap = 0, indicator_gap = 0, oracle_gap = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::size_t n = 20 + (seed * 37) % 281;  // up to 300
    const auto rec = oracle::random_records(seed, n);
    const double horizon = 1.0 + (seed % 8);
    const auto fast = pseudo_observations(rec, horizon);
    const auto slow = oracle::pseudo_observations(rec, horizon);
    for (std::size_t i = 0; i < n; ++i) oracle_gap = std::max(oracle_gap, std::abs(fast[i] - slow[i]));
    const double mean = std::accumulate(fast.begin(), fast.end(), 0.0) / double(n);
    mean_gap = std::max(mean_gap, std::abs(mean - km_cumulative_incidence(rec, horizon)));

    auto uncensored = rec;
    for (auto& r : uncensored) r.event = true;
    const auto ind = pseudo_observations(uncensored, horizon);
    for (std::size_t i = 0; i < n; ++i) {
      indicator_gap = std::max(indicator_gap, std::abs(ind[i] - (uncensored[i].time <= horizon ? 1.0 : 0.0)));
    }
  }
  return {mean_gap <= 1e-12 && indicator_gap <= 1e-12 && oracle_gap <= 1e-10,
          fmt("mean identity %.1e, indicator reduction %.1e, naive oracle %.1e", mean_gap, indicator_gap,
              oracle_gap)};
}

Outcome survival_scaling() {
  const auto s = builtin_survival_scenario();
  const auto rep = simulate_ciw(s);
  const auto& small = rep.sizes[0];
  const auto& large = rep.sizes[1];
  const double expected = std::sqrt(double(large.n) / double(small.n));
  double worst_ratio = 0, worst_mean = 0;
  for (std::size_t m = 0; m < 6; ++m) {
    const double ratio = small.mean_width[m] / large.mean_width[m];
    worst_ratio = std::max(worst_ratio, std::abs(ratio - expected) / expected);
    worst_mean = std::max(worst_mean, std::abs(small.mean_estimate[m] - large.mean_estimate[m]));
  }
  return {worst_ratio <= 0.10 && worst_mean <= 0.005 && small.degenerate == 0 && large.degenerate == 0,
          fmt("%.0f reps, max CIW-ratio deviation %.3f from %.3f, max mean gap %.4f", double(s.repetitions),
              worst_ratio, expected, worst_mean)};
}

Outcome property_suite() {
  std::mt19937_64 g(20240607);
  std::uniform_real_distribution<double> rate(0.05, 0.95), width(0.02, 0.3);
  std::uniform_int_distribution<int> cell(1, 500);
  int bad[5] = {0, 0, 0, 0, 0};
  int f1_infeasible = 0;
  constexpr int kCases = 1000;
  for (int i = 0; i < kCases; ++i) {
    PerformanceAnticipation a;
    a.threshold = 0.2;
    a.prevalence = rate(g);
    a.sensitivity = rate(g);
    a.specificity = rate(g);
    a = a.completed();
    const double w = width(g);
    bool minimal = true, quadratic = true;
    for (Measure m : kProportionMeasures) {
      const auto r = solve_wald(a, {m, TargetMode::CIW, w});
      const double se = ciw_to_se(w);
      minimal = minimal && measure_se(m, a, r.n) <= se * (1 + 1e-12) &&
                (r.n == 1 || measure_se(m, a, r.n - 1) > se);
      const double ratio = solve_wald(a, {m, TargetMode::CIW, w / 2}).exact_n / r.exact_n;
      quadratic = quadratic && std::abs(ratio - 4.0) <= 4e-9;
    }
    try {
      const auto f1 = solve_wald(a, {Measure::F1, TargetMode::CIW, w});
      minimal = minimal && f1.exact_n <= double(f1.n) && double(f1.n) - 1 < f1.exact_n * (1 + 1e-12);
    } catch (const Error& e) {
      // coupled precision/recall targets can rule out any finite n
      if (e.code() != ErrorCode::InconsistentTargets) throw;
      ++f1_infeasible;
    }
    bad[0] += !minimal;
    bad[1] += !quadratic;

    const double v = rate(g), phi = rate(g), se = ciw_to_se(width(g));
    const double ns = n_sensitivity(v, phi, se).exact_n, nsp = n_specificity(v, 1 - phi, se).exact_n;
    bad[2] += std::abs(ns - nsp) > 1e-12 * ns;

    const ConfusionMatrix cm{double(cell(g)), double(cell(g)), double(cell(g)), double(cell(g))};
    const double P = measure_value(cm, Measure::PPV), R = measure_value(cm, Measure::Sensitivity);
    bad[3] += std::abs(2 * P * R / (P + R) - measure_value(cm, Measure::F1)) > 1e-12;
    const double decomposed = R * cm.prevalence() + measure_value(cm, Measure::Specificity) * (1 - cm.prevalence());
    bad[4] += std::abs(measure_value(cm, Measure::Accuracy) - decomposed) > 1e-12;
  }
  const int total = bad[0] + bad[1] + bad[2] + bad[3] + bad[4];
  return {total == 0, fmt("1000 cases each; violations: minimality %.0f, scaling %.0f, duality %.0f, ", bad[0],
                          bad[1], bad[2]) +
                          fmt("F1 identity %.0f, accuracy decomposition %.0f (F1 targets infeasible in %.0f cases)",
                              bad[3], bad[4], f1_infeasible)};
}

}  // namespace

int main() {
  report(1, "threshold measure golden suite", threshold_golden, 1.0);
  report(2, "Beta cohort pipeline", cohort_pipeline, 30.0);
  report(3, "calibration, discrimination and net benefit golden suite", criteria_golden, 0);
  report(4, "Agresti-Coull iterative sizes", agresti_coull_suite, 0);
  report(5, "inverse mode at n=949", inverse_at_949, 0);
  report(6, "measure SE vs bootstrap", bootstrap_oracle, 0);
  report(7, "pseudo-observations", pseudo_suite, 10.0);
  report(8, "survival CIW scaling", survival_scaling, 300.0);
  report(9, "property suite", property_suite, 0);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
