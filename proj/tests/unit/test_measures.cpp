#include <doctest.h>

#include <cmath>
#include <vector>

#include "valsize/anticipation.hpp"
#include "valsize/error.hpp"
#include "valsize/measures.hpp"

using namespace valsize;

TEST_CASE("build_confusion counts strictly above the threshold as positive") {
  const std::vector<double> p{0.9, 0.2};
  CHECK(build_confusion(p, std::vector<int>{1, 0}, 0.5).tp == 1);
  CHECK(build_confusion(p, std::vector<int>{1, 0}, 0.5).tn == 1);
  const auto inverted = build_confusion(p, std::vector<int>{0, 1}, 0.5);
  CHECK(inverted.fp == 1);
  CHECK(inverted.fn == 1);

  // a probability equal to the threshold is negative
  const auto tie = build_confusion(std::vector<double>{0.5}, std::vector<int>{1}, 0.5);
  CHECK(tie.fn == 1);
  CHECK(tie.tp == 0);
}

TEST_CASE("build_confusion rejects bad input") {
  CHECK_THROWS_AS(build_confusion(std::vector<double>{0.1}, std::vector<int>{1, 0}, 0.5), Error);
  CHECK_THROWS_AS(build_confusion(std::vector<double>{}, std::vector<int>{}, 0.5), Error);
  CHECK_THROWS_AS(build_confusion(std::vector<double>{1.2}, std::vector<int>{1}, 0.5), Error);
  CHECK_THROWS_AS(build_confusion(std::vector<double>{0.2}, std::vector<int>{1}, 1.0), Error);
}

TEST_CASE("point estimates from cell counts") {
  const ConfusionMatrix cm{3, 1, 5, 1};
  CHECK(measure_value(cm, Measure::Accuracy) == doctest::Approx(0.8));
  CHECK(measure_value(cm, Measure::F1) == doctest::Approx(0.75));
  CHECK(measure_value(cm, Measure::Sensitivity) == doctest::Approx(0.75));
  CHECK(measure_value(cm, Measure::Specificity) == doctest::Approx(5.0 / 6.0));
  CHECK(measure_value(cm, Measure::PPV) == doctest::Approx(0.75));
  CHECK(measure_value(cm, Measure::NPV) == doctest::Approx(5.0 / 6.0));
  CHECK(cm.prevalence() == doctest::Approx(0.4));
}

TEST_CASE("F1 from rounded precision and recall") {
  const double p = 0.468, r = 0.988;
  CHECK(2 * p * r / (p + r) == doctest::Approx(0.635).epsilon(0.001));
}

TEST_CASE("empty denominators raise UndefinedMeasure naming the cells") {
  const ConfusionMatrix no_events{0, 4, 6, 0};
  try {
    measure_value(no_events, Measure::Sensitivity);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedMeasure);
    CHECK(std::string(e.what()).find("tp") != std::string::npos);
  }
  CHECK_THROWS_AS(measure_value(ConfusionMatrix{}, Measure::Accuracy), Error);
  CHECK(measure_value(no_events, Measure::Specificity) == doctest::Approx(0.6));
}

TEST_CASE("measure_se for anticipated values") {
  PerformanceAnticipation a;
  a.prevalence = 0.43;
  a.accuracy = 0.5;
  CHECK(measure_se(Measure::Accuracy, a, 100) == doctest::Approx(0.05));

  a.sensitivity = 0.988;
  const double se = measure_se(Measure::Sensitivity, a, 949);
  CHECK(se == doctest::Approx(std::sqrt(0.988 * 0.012 / (949 * 0.43))));
  CHECK(se == doctest::Approx(0.00539).epsilon(0.002));
  const Interval ci = wald_interval(0.988, se);
  CHECK(ci.low == doctest::Approx(0.977).epsilon(0.001));
  CHECK(ci.high == doctest::Approx(0.999).epsilon(0.001));
}

TEST_CASE("F1 interval at n=949") {
  PerformanceAnticipation a;
  a.prevalence = 0.43;
  a.ppv = 0.468;
  a.sensitivity = 0.988;
  a.specificity = 0.147;
  a.f1 = 0.636;
  const double se = measure_se(Measure::F1, a, 949);
  const Interval ci = wald_interval(0.636, se);
  CHECK(std::abs(ci.low - 0.603) <= 0.003);
  CHECK(std::abs(ci.high - 0.668) <= 0.003);
}

TEST_CASE("precision-recall covariance") {
  CHECK(cov_precision_recall(1.0 - 1e-15, 0.5, 0.5, 0.4, 10) == doctest::Approx(0.0));

  // hand evaluation of the rate form at n = 1
  const double p = 0.468, r = 0.988, spec = 0.147, phi = 0.43;
  const double hand = p * (1 - p) * (1 - r) / phi + p * (1 - p) * spec / (1 - phi);
  CHECK(cov_precision_recall(p, r, spec, phi, 1) == doctest::Approx(hand).epsilon(1e-12));
  CHECK(hand == doctest::Approx(0.0711578).epsilon(1e-5));

  // the cell and rate forms agree on integer matrices
  for (const ConfusionMatrix cm : {ConfusionMatrix{30, 12, 50, 8}, ConfusionMatrix{7, 3, 91, 2},
                                   ConfusionMatrix{120, 45, 300, 35}}) {
    const double n = cm.n();
    const double P = cm.tp / (cm.tp + cm.fp);
    const double R = cm.tp / (cm.tp + cm.fn);
    const double S = cm.tn / (cm.tn + cm.fp);
    const double rate = cov_precision_recall(P, R, S, cm.prevalence(), n);
    CHECK(std::abs(cov_precision_recall(cm) - rate) <= 1e-12);
  }
}

TEST_CASE("Wald interval clamps but keeps the raw width") {
  const Interval all = wald_interval(1.0, 0.0);
  CHECK(all.low == 1.0);
  CHECK(all.high == 1.0);
  const Interval wide = wald_interval(0.95, 0.05);
  CHECK(wide.high == 1.0);
  CHECK(wide.raw_width == doctest::Approx(2 * 1.96 * 0.05));
}

TEST_CASE("Agresti-Coull interval") {
  const Interval ci = agresti_coull_interval(10, 10);
  CHECK(ci.center == doctest::Approx(12.0 / 14.0));
  const double half = 1.96 * std::sqrt(ci.center * (1 - ci.center) / 10);
  CHECK(half == doctest::Approx(0.217).epsilon(0.003));
  CHECK(ci.raw_width == doctest::Approx(2 * half));
  CHECK(ci.high == 1.0);
  CHECK_THROWS_AS(agresti_coull_interval(11, 10), Error);
}

TEST_CASE("Wald and Agresti-Coull widths agree for large n and central values") {
  for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double n : {500.0, 1000.0, 5000.0}) {
      const double x = std::round(v * n);
      const double se = std::sqrt(v * (1 - v) / n);
      const double wald = wald_interval(v, se).raw_width;
      const double ac = agresti_coull_interval(x, n).raw_width;
      CHECK(std::abs(wald - ac) < 0.005);
    }
  }
}

TEST_CASE("estimate uses the observed cell denominators") {
  const ConfusionMatrix cm{40, 10, 45, 5};
  const MeasureEstimate sens = estimate(cm, Measure::Sensitivity);
  CHECK(sens.value == doctest::Approx(40.0 / 45.0));
  CHECK(sens.se == doctest::Approx(std::sqrt(sens.value * (1 - sens.value) / 45.0)));
  CHECK(sens.ci.raw_width == doctest::Approx(2 * 1.96 * sens.se));

  const MeasureEstimate ac = estimate(cm, Measure::PPV, IntervalMethod::AgrestiCoull);
  CHECK(ac.method == IntervalMethod::AgrestiCoull);
  CHECK(ac.ci.center == doctest::Approx(42.0 / 54.0));

  const MeasureEstimate f1 = estimate(cm, Measure::F1, IntervalMethod::AgrestiCoull);
  CHECK(f1.method == IntervalMethod::Wald);
  CHECK(f1.ci.low <= f1.value);
  CHECK(f1.ci.high >= f1.value);
}

TEST_CASE("names round-trip") {
  for (Measure m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
  CHECK(parse_measure("recall") == Measure::Sensitivity);
  CHECK(parse_measure("precision") == Measure::PPV);
  CHECK_FALSE(parse_measure("auc").has_value());
  CHECK(parse_interval_method("agresti-coull") == IntervalMethod::AgrestiCoull);
  CHECK(parse_interval_method("wald") == IntervalMethod::Wald);
}
