#include "app.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "report.hpp"
#include "valsize/error.hpp"
#include "valsize/riskdist.hpp"
#include "valsize/version.hpp"

namespace valsize::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

double riley_se(const PrecisionTarget& t) { return t.se(); }

RileyInputs riley_inputs(const RileySpec& spec, double prevalence,
                         const std::optional<SimulatedCohort>& cohort) {
  RileyInputs r;
  r.prevalence = spec.prevalence.value_or(prevalence);
  if (spec.oe_target) {
    r.oe_target_se = spec.oe_target->mode == TargetMode::CIW
                         ? oe_ciw_to_log_se(spec.oe_target->magnitude)
                         : spec.oe_target->magnitude;
  }
  if (spec.slope_target) {
    if (!cohort) throw Error(ErrorCode::Config, "$.riley: calibration slope needs risk_distribution");
    r.fisher = fisher_info(lp_samples(cohort->probs));
    r.slope_target_se = riley_se(*spec.slope_target);
  }
  if (spec.cstat_target) {
    r.cstatistic = spec.cstatistic;
    r.cstat_target_se = riley_se(*spec.cstat_target);
  }
  if (spec.snb_target) r.snb_target_se = riley_se(*spec.snb_target);
  return r;
}

MeasuresSummary measures_from_file(const ScenarioConfig& c) {
  std::ifstream in(*c.predictions);
  if (!in) throw Error(ErrorCode::Config, "$.predictions: cannot open " + *c.predictions);
  const Predictions p = read_predictions(in);
  MeasuresSummary s;
  s.survival = p.survival;
  std::vector<double> pseudo;
  std::span<const double> risks = p.probs;
  if (p.survival) {
    if (!c.horizon) throw Error(ErrorCode::Config, "$.horizon: required for time,event,risk predictions");
    s.horizon = c.horizon;
    s.records = p.records.size();
    pseudo = pseudo_observations(p.records, *c.horizon);
  } else {
    s.records = p.probs.size();
  }
  for (double t : c.thresholds) {
    MeasuresRow row;
    row.threshold = t;
    if (p.survival) {
      const PseudoConfusion pc = pseudo_confusion(pseudo, risks, t);
      row.cm = pc.cm;
      row.clamped_cells = pc.clamped_cells;
    } else {
      row.cm = build_confusion(p.probs, p.outcomes, t);
    }
    for (Measure m : kAllMeasures) {
      try {
        row.estimates.push_back(estimate(row.cm, m, c.method));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UndefinedMeasure) throw;
        row.undefined.push_back(std::string(to_string(m)) + ": " + e.what());
      }
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

}  // namespace

Predictions read_predictions(std::istream& in) {
  Predictions p;
  std::string line;
  std::size_t lineno = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_fields(line);
    const std::string where = "predictions line " + std::to_string(lineno);
    std::vector<double> v(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_double(fields[i], v[i]);
    if (columns == 0) {
      columns = fields.size();
      if (columns != 2 && columns != 3) {
        throw Error(ErrorCode::Config, where + ": expected prob,outcome or time,event,risk columns");
      }
      p.survival = columns == 3;
      if (!numeric) continue;  // header
    }
    if (fields.size() != columns) {
      throw Error(ErrorCode::Config, where + ": expected " + std::to_string(columns) + " fields");
    }
    if (!numeric) throw Error(ErrorCode::Config, where + ": not numeric");
    if (p.survival) {
      if (!(v[0] > 0) || (v[1] != 0 && v[1] != 1) || !(v[2] >= 0 && v[2] <= 1)) {
        throw Error(ErrorCode::Config, where + ": need time > 0, event in {0,1}, risk in [0,1]");
      }
      p.records.push_back({v[0], v[1] == 1});
      p.probs.push_back(v[2]);
    } else {
      if (!(v[0] >= 0 && v[0] <= 1) || (v[1] != 0 && v[1] != 1)) {
        throw Error(ErrorCode::Config, where + ": need prob in [0,1] and outcome in {0,1}");
      }
      p.probs.push_back(v[0]);
      p.outcomes.push_back(static_cast<int>(v[1]));
    }
  }
  if (p.probs.empty()) throw Error(ErrorCode::Config, "predictions file has no data rows");
  return p;
}

RunResult execute(const ScenarioConfig& c) {
  validate(c);
  RunResult out;
  out.provenance.mode = c.mode;
  out.provenance.seed = c.seed;
  out.provenance.method = c.method;
  out.provenance.version = kVersion;

  if (c.mode == Mode::Survival) {
    SurvivalScenario s = *c.survival;
    s.seed = c.seed;
    out.survival = simulate_ciw(s, c.raw_csv.has_value());
    return out;
  }
  if (c.mode == Mode::Measures) {
    out.measures = measures_from_file(c);
    return out;
  }

  std::optional<SimulatedCohort> cohort;
  if (c.risk) {
    cohort = sample_cohort(*c.risk, c.cohort_size, c.seed);
    out.provenance.cohort_size = c.cohort_size;
    out.provenance.cohort_prevalence = cohort->prevalence();
    for (double t : c.thresholds) out.anticipated.push_back(anticipated_measures(*cohort, t));
  } else {
    for (const auto& a : c.anticipated) out.anticipated.push_back(a.completed());
  }

  if (c.mode == Mode::BinaryInverse) {
    out.at_n = c.at_n;
    for (const auto& a : out.anticipated) {
      for (Measure m : kAllMeasures) {
        if (!a.get(m)) continue;
        out.inverse.push_back({a.threshold, ciw_at_n(m, a, *c.at_n, c.method)});
      }
    }
    return out;
  }

  std::optional<RileyInputs> riley;
  if (c.riley) {
    const double prevalence =
        cohort ? cohort->prevalence() : out.anticipated.front().prevalence;
    riley = riley_inputs(*c.riley, prevalence, cohort);
  }
  out.plan = plan_binary(out.anticipated, c.targets, riley, c.method);
  return out;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return 2;
    case ErrorCode::Simulation: return 4;
    case ErrorCode::InvalidArgument:
    case ErrorCode::UndefinedMeasure:
    case ErrorCode::InconsistentTargets:
    case ErrorCode::Degenerate: return 3;
  }
  return 1;
}

int run(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunResult result = execute(config);
    out << emit(result, config.format);
    if (config.raw_csv && result.survival) {
      std::ofstream raw(*config.raw_csv);
      if (!raw) throw Error(ErrorCode::Config, "$.survival.raw_csv: cannot write " + *config.raw_csv);
      write_raw_csv(*result.survival, raw);
    }
    return 0;
  } catch (const Error& e) {
    err << "valsize: " << e.what() << "\n";
    return exit_code(e.code());
  }
}

}  // namespace valsize::cli
