#include "valsize/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "valsize/error.hpp"
#include "valsize/numeric.hpp"
#include "valsize/random.hpp"
#include "valsize/riskdist.hpp"

namespace valsize {

namespace {

void require_records(std::span<const SurvivalRecord> records) {
  for (const SurvivalRecord& r : records) {
    require(r.time > 0.0 && std::isfinite(r.time), "survival times must be finite and positive");
  }
}

// Distinct event times up to the horizon with event and at-risk counts.
struct EventTable {
  std::vector<double> time;
  std::vector<double> events;
  std::vector<double> at_risk;
};

EventTable event_table(std::span<const SurvivalRecord> records, double horizon) {
  std::vector<SurvivalRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const SurvivalRecord& a, const SurvivalRecord& b) { return a.time < b.time; });
  EventTable table;
  const std::size_t n = sorted.size();
  for (std::size_t i = 0; i < n;) {
    const double t = sorted[i].time;
    if (t > horizon) break;
    std::size_t j = i;
    double d = 0;
    while (j < n && sorted[j].time == t) {
      d += sorted[j].event ? 1.0 : 0.0;
      ++j;
    }
    if (d > 0) {
      table.time.push_back(t);
      table.events.push_back(d);
      table.at_risk.push_back(static_cast<double>(n - i));
    }
    i = j;
  }
  return table;
}

double lp_draw(const LpDistribution& lp, Rng& rng) {
  if (const auto* normal = std::get_if<NormalLp>(&lp)) {
    return normal->mean + normal->sd * rng.normal();
  }
  const auto& values = std::get<EmpiricalLp>(lp).values;
  return values[rng.index(values.size())];
}

std::uint64_t repetition_stream(std::size_t size_index, std::size_t repetition) {
  return (static_cast<std::uint64_t>(size_index) << 32) + repetition;
}

}  // namespace

KMCurve::KMCurve(std::span<const SurvivalRecord> records) {
  require(!records.empty(), "kaplan-meier needs at least one record");
  require_records(records);
  const EventTable table = event_table(records, std::numeric_limits<double>::infinity());
  double s = 1.0;
  steps_.reserve(table.time.size());
  for (std::size_t j = 0; j < table.time.size(); ++j) {
    s *= 1.0 - table.events[j] / table.at_risk[j];
    steps_.push_back({table.time[j], s});
  }
}

double KMCurve::survival(double t) const {
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double value, const Step& s) { return value < s.time; });
  if (it == steps_.begin()) return 1.0;
  return std::prev(it)->survival;
}

double km_cumulative_incidence(std::span<const SurvivalRecord> records, double horizon) {
  require(!records.empty(), "kaplan-meier needs at least one record");
  require_records(records);
  const EventTable table = event_table(records, horizon);
  double s = 1.0;
  for (std::size_t j = 0; j < table.time.size(); ++j) {
    s *= 1.0 - table.events[j] / table.at_risk[j];
  }
  return 1.0 - s;
}

double predicted_risk(double baseline_survival, double lp) {
  require(baseline_survival > 0.0 && baseline_survival <= 1.0,
          "baseline survival must lie in (0, 1]");
  require(std::isfinite(lp), "linear predictor must be finite");
  return 1.0 - std::pow(baseline_survival, std::exp(lp));
}

std::vector<double> pseudo_observations(std::span<const SurvivalRecord> records,
                                        double horizon) {
  require(records.size() >= 2, "pseudo-observations need at least two records");
  require_records(records);
  const EventTable table = event_table(records, horizon);
  const std::size_t events = table.time.size();

  // prefix[k]: product over j < k of the factor with one subject fewer at risk.
  // suffix[k]: product over j >= k of the full-sample factor.
  std::vector<double> prefix(events + 1, 1.0);
  std::vector<double> suffix(events + 1, 1.0);
  for (std::size_t j = 0; j < events; ++j) {
    const double reduced = table.at_risk[j] - 1.0;
    const double factor = reduced > 0 ? 1.0 - table.events[j] / reduced : 1.0;
    prefix[j + 1] = prefix[j] * factor;
  }
  for (std::size_t j = events; j-- > 0;) {
    suffix[j] = suffix[j + 1] * (1.0 - table.events[j] / table.at_risk[j]);
  }

  const double n = static_cast<double>(records.size());
  const double full = 1.0 - suffix[0];
  std::vector<double> pseudo(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SurvivalRecord& r = records[i];
    const std::size_t k = static_cast<std::size_t>(
        std::lower_bound(table.time.begin(), table.time.end(), r.time) - table.time.begin());
    double s_minus;
    if (k < events && table.time[k] == r.time) {
      const double reduced = table.at_risk[k] - 1.0;
      const double d = table.events[k] - (r.event ? 1.0 : 0.0);
      const double mid = reduced > 0 ? 1.0 - d / reduced : 1.0;
      s_minus = prefix[k] * mid * suffix[k + 1];
    } else {
      s_minus = prefix[k] * suffix[k];
    }
    pseudo[i] = n * full - (n - 1.0) * (1.0 - s_minus);
  }
  return pseudo;
}

PseudoConfusion pseudo_confusion(std::span<const double> pseudo, std::span<const double> risks,
                                 double threshold) {
  require(pseudo.size() == risks.size(), "pseudo-values and risks differ in length");
  CompensatedSum tp, fp, fn, tn;
  for (std::size_t i = 0; i < pseudo.size(); ++i) {
    if (risks[i] > threshold) {
      tp.add(pseudo[i]);
      fp.add(1.0 - pseudo[i]);
    } else {
      fn.add(pseudo[i]);
      tn.add(1.0 - pseudo[i]);
    }
  }
  PseudoConfusion out;
  auto cell = [&](double v) {
    if (v < 0.0) {
      ++out.clamped_cells;
      return 0.0;
    }
    return v;
  };
  out.cm = {cell(tp.value()), cell(fp.value()), cell(tn.value()), cell(fn.value())};
  return out;
}

double Weibull::survival(double t) const { return std::exp(-std::pow(t / scale, shape)); }

void SurvivalScenario::validate() const {
  require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
  require(event.shape > 0.0 && event.scale > 0.0, "event-time model needs positive shape and scale");
  if (censoring) {
    require(censoring->shape > 0.0 && censoring->scale > 0.0,
            "censoring model needs positive shape and scale");
  }
  if (admin_censoring) require(*admin_censoring > 0.0, "administrative censoring time must be positive");
  if (const auto* normal = std::get_if<NormalLp>(&lp)) {
    require(normal->sd >= 0.0 && std::isfinite(normal->mean), "normal LP needs finite mean, sd >= 0");
  } else {
    const auto& values = std::get<EmpiricalLp>(lp).values;
    require(!values.empty(), "empirical LP distribution is empty");
    for (double v : values) require(std::isfinite(v), "empirical LP values must be finite");
  }
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  require(!sizes.empty(), "at least one candidate sample size is required");
  for (std::size_t n : sizes) require(n >= 2, "candidate sample sizes must be at least 2");
  require(repetitions >= 1, "repetitions must be at least 1");
}

SurvivalScenario builtin_survival_scenario() {
  SurvivalScenario s;
  s.horizon = 3.0;
  s.lp = NormalLp{0.0, 0.75};
  s.event = exponential_with_rate(-std::log(0.92) / 3.0);
  s.censoring = exponential_with_rate(0.08);
  s.admin_censoring = 10.0;
  s.threshold = 0.05;
  s.sizes = {3600, 14250};
  s.repetitions = 200;
  s.seed = kDefaultSeed;
  return s;
}

RepetitionResult simulate_repetition(const SurvivalScenario& s, std::size_t size_index,
                                     std::size_t repetition) {
  const std::size_t n = s.sizes.at(size_index);
  Rng rng(s.seed, repetition_stream(size_index, repetition));
  const double s0 = s.baseline_survival();

  std::vector<SurvivalRecord> records(n);
  std::vector<double> risks(n);
  RepetitionResult out;
  out.n = n;
  out.repetition = repetition;
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = lp_draw(s.lp, rng);
    // S(t | lp) = S0(t)^exp(lp), i.e. a Weibull with scale shrunk by exp(lp)^(1/shape).
    const double event_time =
        s.event.scale * std::pow(rng.exponential(1.0) / std::exp(lp), 1.0 / s.event.shape);
    double censor_time = std::numeric_limits<double>::infinity();
    if (s.censoring) censor_time = rng.weibull(s.censoring->shape, s.censoring->scale);
    if (s.admin_censoring) censor_time = std::min(censor_time, *s.admin_censoring);
    const bool event = event_time <= censor_time;
    records[i] = {event ? event_time : censor_time, event};
    risks[i] = predicted_risk(s0, lp);
    if (event && event_time <= s.horizon) out.observed_events += 1.0;
  }

  if (out.observed_events == 0.0) {
    out.degenerate = true;
    return out;
  }
  const std::vector<double> pseudo = pseudo_observations(records, s.horizon);
  const PseudoConfusion pc = pseudo_confusion(pseudo, risks, s.threshold);
  out.cm = pc.cm;
  out.clamped_cells = pc.clamped_cells;
  try {
    out.estimates = estimate_all(pc.cm);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedMeasure) throw;
    out.degenerate = true;
  }
  return out;
}

SurvivalReport simulate_ciw(const SurvivalScenario& s, bool keep_raw) {
  s.validate();
  const std::size_t sizes = s.sizes.size();
  const std::size_t reps = s.repetitions;
  std::vector<RepetitionResult> results(sizes * reps);
  parallel_for(results.size(), [&](std::size_t task) {
    results[task] = simulate_repetition(s, task / reps, task % reps);
  });

  SurvivalReport report;
  for (std::size_t k = 0; k < sizes; ++k) {
    SizeSummary summary;
    summary.n = s.sizes[k];
    std::array<CompensatedSum, 6> est, low, high, width;
    CompensatedSum events;
    for (std::size_t r = 0; r < reps; ++r) {
      const RepetitionResult& rep = results[k * reps + r];
      summary.clamp_events += static_cast<std::size_t>(rep.clamped_cells);
      if (rep.degenerate) {
        ++summary.degenerate;
        continue;
      }
      ++summary.completed;
      events.add(rep.observed_events);
      for (std::size_t m = 0; m < 6; ++m) {
        est[m].add(rep.estimates[m].value);
        low[m].add(rep.estimates[m].ci.low);
        high[m].add(rep.estimates[m].ci.high);
        width[m].add(rep.estimates[m].ci.raw_width);
      }
    }
    if (summary.completed == 0) {
      throw Error(ErrorCode::Simulation,
                  "every repetition at n=" + std::to_string(summary.n) +
                      " was degenerate (no events before the horizon or an empty margin)");
    }
    const double c = static_cast<double>(summary.completed);
    summary.mean_observed_events = events.value() / c;
    for (std::size_t m = 0; m < 6; ++m) {
      summary.mean_estimate[m] = est[m].value() / c;
      summary.mean_ci_low[m] = low[m].value() / c;
      summary.mean_ci_high[m] = high[m].value() / c;
      summary.mean_width[m] = width[m].value() / c;
    }
    report.sizes.push_back(summary);
  }
  if (keep_raw) report.raw = std::move(results);
  return report;
}

}  // namespace valsize
