#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>

#include "valsize/error.hpp"

namespace valsize::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Config, path + ": " + what);
}

void only_keys(const json& obj, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) fail(path + "." + key, "unknown field");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double probability(const json& v, const std::string& path) {
  const double p = number(v, path);
  if (!(p > 0.0 && p < 1.0)) fail(path, "must lie in the open interval (0, 1)");
  return p;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

std::uint64_t unsigned_int(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(number(v, path));
  }
  return out;
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

PrecisionTarget riley_target(const json& obj, const std::string& path, const char* ciw_key,
                             const char* se_key) {
  const bool has_ciw = obj.contains(ciw_key);
  const bool has_se = obj.contains(se_key);
  if (has_ciw && has_se) fail(path, std::string("give either ") + ciw_key + " or " + se_key);
  PrecisionTarget t;
  if (has_ciw) {
    t.mode = TargetMode::CIW;
    t.magnitude = positive(obj.at(ciw_key), path + "." + ciw_key);
  } else {
    t.mode = TargetMode::SE;
    t.magnitude = positive(obj.at(se_key), path + "." + se_key);
  }
  return t;
}

RiskDistribution parse_risk(const json& v, const std::string& path,
                            const std::filesystem::path& base_dir) {
  only_keys(v, path, {"beta", "empirical", "empirical_file"});
  if (v.size() != 1) fail(path, "give exactly one of beta, empirical, empirical_file");
  if (v.contains("beta")) {
    const json& b = v.at("beta");
    only_keys(b, path + ".beta", {"a", "b"});
    if (!b.contains("a") || !b.contains("b")) fail(path + ".beta", "needs a and b");
    return BetaDist{positive(b.at("a"), path + ".beta.a"), positive(b.at("b"), path + ".beta.b")};
  }
  EmpiricalDist d;
  if (v.contains("empirical")) {
    d.probs = numbers(v.at("empirical"), path + ".empirical");
  } else {
    const std::filesystem::path file = base_dir / string(v.at("empirical_file"), path + ".empirical_file");
    std::ifstream in(file);
    if (!in) fail(path + ".empirical_file", "cannot open " + file.string());
    try {
      d.probs = read_probabilities(in);
    } catch (const Error& e) {
      fail(path + ".empirical_file", file.string() + " " + e.what());
    }
  }
  try {
    validate(RiskDistribution{d});
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return d;
}

Weibull parse_time_model(const json& v, const std::string& path) {
  only_keys(v, path, {"exponential", "weibull"});
  if (v.size() != 1) fail(path, "give exactly one of exponential, weibull");
  if (v.contains("exponential")) {
    const json& e = v.at("exponential");
    only_keys(e, path + ".exponential", {"rate"});
    if (!e.contains("rate")) fail(path + ".exponential", "needs rate");
    return exponential_with_rate(positive(e.at("rate"), path + ".exponential.rate"));
  }
  const json& w = v.at("weibull");
  only_keys(w, path + ".weibull", {"shape", "scale"});
  if (!w.contains("shape") || !w.contains("scale")) fail(path + ".weibull", "needs shape and scale");
  return {positive(w.at("shape"), path + ".weibull.shape"),
          positive(w.at("scale"), path + ".weibull.scale")};
}

SurvivalScenario parse_survival(const json& v, const std::string& path,
                                std::optional<std::string>& raw_csv) {
  only_keys(v, path,
            {"builtin", "horizon", "lp", "event", "censoring", "admin_censoring", "threshold",
             "sizes", "repetitions", "raw_csv"});
  SurvivalScenario s = builtin_survival_scenario();
  const bool builtin = v.contains("builtin") && v.at("builtin").is_boolean() && v.at("builtin").get<bool>();
  if (!builtin) {
    for (const char* key : {"horizon", "lp", "event", "threshold", "sizes"}) {
      if (!v.contains(key)) fail(path + "." + key, "required unless builtin is true");
    }
    s.censoring.reset();
    s.admin_censoring.reset();
  }
  if (v.contains("horizon")) s.horizon = positive(v.at("horizon"), path + ".horizon");
  if (v.contains("lp")) {
    const json& lp = v.at("lp");
    only_keys(lp, path + ".lp", {"normal", "empirical"});
    if (lp.size() != 1) fail(path + ".lp", "give exactly one of normal, empirical");
    if (lp.contains("normal")) {
      const json& n = lp.at("normal");
      only_keys(n, path + ".lp.normal", {"mean", "sd"});
      if (!n.contains("mean") || !n.contains("sd")) fail(path + ".lp.normal", "needs mean and sd");
      const double sd = number(n.at("sd"), path + ".lp.normal.sd");
      if (sd < 0) fail(path + ".lp.normal.sd", "must be non-negative");
      s.lp = NormalLp{number(n.at("mean"), path + ".lp.normal.mean"), sd};
    } else {
      EmpiricalLp e{numbers(lp.at("empirical"), path + ".lp.empirical")};
      if (e.values.empty()) fail(path + ".lp.empirical", "must not be empty");
      s.lp = std::move(e);
    }
  }
  if (v.contains("event")) s.event = parse_time_model(v.at("event"), path + ".event");
  if (v.contains("censoring")) {
    if (v.at("censoring").is_null()) {
      s.censoring.reset();
    } else {
      s.censoring = parse_time_model(v.at("censoring"), path + ".censoring");
    }
  }
  if (v.contains("admin_censoring")) {
    if (v.at("admin_censoring").is_null()) {
      s.admin_censoring.reset();
    } else {
      s.admin_censoring = positive(v.at("admin_censoring"), path + ".admin_censoring");
    }
  }
  if (v.contains("threshold")) s.threshold = probability(v.at("threshold"), path + ".threshold");
  if (v.contains("sizes")) {
    const json& sizes = v.at("sizes");
    if (!sizes.is_array() || sizes.empty()) fail(path + ".sizes", "expected a non-empty array");
    s.sizes.clear();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto n = unsigned_int(sizes[i], path + ".sizes[" + std::to_string(i) + "]");
      if (n < 2) fail(path + ".sizes[" + std::to_string(i) + "]", "must be at least 2");
      s.sizes.push_back(static_cast<std::size_t>(n));
    }
  }
  if (v.contains("repetitions")) {
    const auto r = unsigned_int(v.at("repetitions"), path + ".repetitions");
    if (r < 1) fail(path + ".repetitions", "must be at least 1");
    s.repetitions = static_cast<std::size_t>(r);
  }
  if (v.contains("raw_csv")) raw_csv = string(v.at("raw_csv"), path + ".raw_csv");
  return s;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Binary: return "binary";
    case Mode::BinaryInverse: return "binary_inverse";
    case Mode::Survival: return "survival";
    case Mode::Measures: return "measures";
  }
  return "?";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
  }
  return "?";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("VALSIZE_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno == 0 && end != env && *end == '\0') return v;
  }
  return kDefaultSeed;
}

ScenarioConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  only_keys(doc, "$",
            {"mode", "risk_distribution", "thresholds", "anticipated", "targets", "riley",
             "interval_method", "seed", "cohort_size", "at_n", "format", "survival",
             "predictions", "horizon"});
  ScenarioConfig c;
  c.seed = default_seed();

  if (doc.contains("mode")) {
    const std::string m = string(doc.at("mode"), "$.mode");
    if (m == "binary") c.mode = Mode::Binary;
    else if (m == "binary_inverse") c.mode = Mode::BinaryInverse;
    else if (m == "survival") c.mode = Mode::Survival;
    else if (m == "measures") c.mode = Mode::Measures;
    else fail("$.mode", "expected binary, binary_inverse, survival or measures");
  }
  if (doc.contains("risk_distribution")) {
    c.risk = parse_risk(doc.at("risk_distribution"), "$.risk_distribution", base_dir);
  }
  if (doc.contains("thresholds")) {
    const auto ts = numbers(doc.at("thresholds"), "$.thresholds");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!(ts[i] > 0.0 && ts[i] < 1.0)) {
        fail("$.thresholds[" + std::to_string(i) + "]", "must lie in the open interval (0, 1)");
      }
    }
    c.thresholds = ts;
  }
  if (doc.contains("anticipated")) {
    const json& list = doc.at("anticipated");
    if (!list.is_array()) fail("$.anticipated", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "$.anticipated[" + std::to_string(i) + "]";
      const json& a = list[i];
      only_keys(a, path,
                {"threshold", "prevalence", "accuracy", "sensitivity", "specificity", "ppv",
                 "npv", "f1"});
      PerformanceAnticipation pa;
      if (!a.contains("threshold") || !a.contains("prevalence")) {
        fail(path, "needs threshold and prevalence");
      }
      pa.threshold = probability(a.at("threshold"), path + ".threshold");
      pa.prevalence = probability(a.at("prevalence"), path + ".prevalence");
      for (Measure m : kAllMeasures) {
        const std::string key(valsize::to_string(m));
        if (!a.contains(key)) continue;
        const double v = probability(a.at(key), path + "." + key);
        switch (m) {
          case Measure::Accuracy: pa.accuracy = v; break;
          case Measure::Specificity: pa.specificity = v; break;
          case Measure::Sensitivity: pa.sensitivity = v; break;
          case Measure::PPV: pa.ppv = v; break;
          case Measure::NPV: pa.npv = v; break;
          case Measure::F1: pa.f1 = v; break;
        }
      }
      try {
        pa.validate();
      } catch (const Error& e) {
        fail(path, e.what());
      }
      c.anticipated.push_back(pa);
    }
  }
  if (doc.contains("targets")) {
    const json& list = doc.at("targets");
    if (!list.is_array()) fail("$.targets", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "$.targets[" + std::to_string(i) + "]";
      const json& t = list[i];
      only_keys(t, path, {"measure", "ciw", "se"});
      if (!t.contains("measure")) fail(path + ".measure", "required");
      const std::string name = string(t.at("measure"), path + ".measure");
      std::vector<Measure> kinds;
      if (name == "all") {
        kinds.assign(kAllMeasures.begin(), kAllMeasures.end());
      } else if (auto m = parse_measure(name)) {
        kinds.push_back(*m);
      } else {
        fail(path + ".measure", "unknown measure '" + name + "'");
      }
      if (t.contains("ciw") == t.contains("se")) fail(path, "give exactly one of ciw or se");
      const bool ciw = t.contains("ciw");
      const std::string key = ciw ? "ciw" : "se";
      for (double mag : numbers(t.at(key), path + "." + key)) {
        PrecisionTarget pt{Measure::Accuracy, ciw ? TargetMode::CIW : TargetMode::SE, mag};
        try {
          pt.validate();
        } catch (const Error& e) {
          fail(path + "." + key, e.what());
        }
        for (Measure m : kinds) {
          pt.kind = m;
          c.targets.push_back(pt);
        }
      }
    }
  }
  if (doc.contains("riley")) {
    const json& r = doc.at("riley");
    only_keys(r, "$.riley",
              {"prevalence", "cstatistic", "cstatistic_ciw", "cstatistic_se", "oe_ciw", "oe_se",
               "slope_ciw", "slope_se", "snb_ciw", "snb_se"});
    RileySpec spec;
    if (r.contains("prevalence")) spec.prevalence = probability(r.at("prevalence"), "$.riley.prevalence");
    if (r.contains("cstatistic")) {
      const double cs = number(r.at("cstatistic"), "$.riley.cstatistic");
      if (!(cs > 0.5 && cs < 1.0)) fail("$.riley.cstatistic", "must lie in (0.5, 1)");
      spec.cstatistic = cs;
    }
    if (r.contains("cstatistic_ciw") || r.contains("cstatistic_se")) {
      spec.cstat_target = riley_target(r, "$.riley", "cstatistic_ciw", "cstatistic_se");
      if (!spec.cstatistic) fail("$.riley.cstatistic", "required with a c-statistic target");
    }
    if (r.contains("oe_ciw") || r.contains("oe_se")) spec.oe_target = riley_target(r, "$.riley", "oe_ciw", "oe_se");
    if (r.contains("slope_ciw") || r.contains("slope_se")) {
      spec.slope_target = riley_target(r, "$.riley", "slope_ciw", "slope_se");
    }
    if (r.contains("snb_ciw") || r.contains("snb_se")) spec.snb_target = riley_target(r, "$.riley", "snb_ciw", "snb_se");
    c.riley = spec;
  }
  if (doc.contains("interval_method")) {
    const std::string m = string(doc.at("interval_method"), "$.interval_method");
    auto method = parse_interval_method(m);
    if (!method) fail("$.interval_method", "expected wald or agresti_coull");
    c.method = *method;
  }
  if (doc.contains("seed")) c.seed = unsigned_int(doc.at("seed"), "$.seed");
  if (doc.contains("cohort_size")) {
    const auto m = unsigned_int(doc.at("cohort_size"), "$.cohort_size");
    if (m < 1) fail("$.cohort_size", "must be at least 1");
    c.cohort_size = static_cast<std::size_t>(m);
  }
  if (doc.contains("at_n")) {
    const auto n = unsigned_int(doc.at("at_n"), "$.at_n");
    if (n < 1) fail("$.at_n", "must be at least 1");
    c.at_n = static_cast<long>(n);
    if (!doc.contains("mode")) c.mode = Mode::BinaryInverse;
  }
  if (doc.contains("format")) {
    const std::string f = string(doc.at("format"), "$.format");
    if (f == "text") c.format = OutputFormat::Text;
    else if (f == "json") c.format = OutputFormat::Json;
    else if (f == "csv") c.format = OutputFormat::Csv;
    else fail("$.format", "expected text, json or csv");
  }
  if (doc.contains("survival")) {
    c.survival = parse_survival(doc.at("survival"), "$.survival", c.raw_csv);
    if (c.raw_csv) c.raw_csv = (base_dir / *c.raw_csv).string();
    if (!doc.contains("mode")) c.mode = Mode::Survival;
  }
  if (doc.contains("predictions")) {
    c.predictions = (base_dir / string(doc.at("predictions"), "$.predictions")).string();
  }
  if (doc.contains("horizon")) c.horizon = positive(doc.at("horizon"), "$.horizon");

  if (c.survival) c.survival->seed = c.seed;
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Config, file.string() + ": cannot open config document");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, file.string() + ": " + e.what());
  }
  return parse_config(doc, file.parent_path());
}

void validate(const ScenarioConfig& c) {
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    if (!(c.thresholds[i] > 0.0 && c.thresholds[i] < 1.0)) {
      fail("$.thresholds[" + std::to_string(i) + "]", "must lie in the open interval (0, 1)");
    }
  }
  switch (c.mode) {
    case Mode::Binary: {
      const bool riley_targets =
          c.riley && (c.riley->cstat_target || c.riley->oe_target || c.riley->slope_target ||
                      c.riley->snb_target);
      if (c.targets.empty() && !riley_targets) fail("$.targets", "at least one target or a fixed N is required");
      [[fallthrough]];
    }
    case Mode::BinaryInverse:
      if (c.mode == Mode::BinaryInverse && !c.at_n) fail("$.at_n", "required in binary_inverse mode");
      if (!c.risk && c.anticipated.empty()) {
        fail("$", "give risk_distribution (with thresholds) or anticipated performance");
      }
      if (c.risk && !c.anticipated.empty()) {
        fail("$", "risk_distribution and anticipated are mutually exclusive");
      }
      if (c.risk && c.thresholds.empty()) fail("$.thresholds", "required with risk_distribution");
      if (c.riley && c.riley->slope_target && !c.risk) {
        fail("$.riley.slope_ciw", "calibration slope needs risk_distribution");
      }
      break;
    case Mode::Survival:
      if (!c.survival) fail("$.survival", "required in survival mode");
      break;
    case Mode::Measures:
      if (!c.predictions) fail("$.predictions", "required in measures mode");
      if (c.thresholds.empty()) fail("$.thresholds", "required in measures mode");
      break;
  }
}

}  // namespace valsize::cli
