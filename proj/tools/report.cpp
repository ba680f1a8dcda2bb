#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "valsize/error.hpp"

namespace valsize {

using nlohmann::json;

void to_json(json& j, const SampleSizeResult& r) {
  j = json{{"criterion", r.criterion},
           {"threshold", r.threshold ? json(*r.threshold) : json(nullptr)},
           {"value", r.value},
           {"target_se", r.target_se},
           {"target_ciw", cli::display_ciw(r)},
           {"exact_n", r.exact_n},
           {"n", r.n},
           {"events", r.events},
           {"achieved_se", r.achieved_se},
           {"achieved_ciw", r.achieved_ciw}};
}

void from_json(const json& j, SampleSizeResult& r) {
  r.criterion = j.at("criterion").get<std::string>();
  const json& t = j.at("threshold");
  r.threshold = t.is_null() ? std::nullopt : std::optional<double>(t.get<double>());
  r.value = j.at("value").get<double>();
  r.target_se = j.at("target_se").get<double>();
  r.exact_n = j.at("exact_n").get<double>();
  r.n = j.at("n").get<long>();
  r.events = j.at("events").get<long>();
  r.achieved_se = j.at("achieved_se").get<double>();
  r.achieved_ciw = j.at("achieved_ciw").get<double>();
}

void to_json(json& j, const SampleSizePlan& p) {
  j = json{{"criteria", p.criteria},
           {"n", p.n},
           {"events", p.events},
           {"prevalence", p.prevalence},
           {"binding", p.binding}};
}

void from_json(const json& j, SampleSizePlan& p) {
  p.criteria = j.at("criteria").get<std::vector<SampleSizeResult>>();
  p.n = j.at("n").get<long>();
  p.events = j.at("events").get<long>();
  p.prevalence = j.at("prevalence").get<double>();
  p.binding = j.at("binding").get<std::vector<std::string>>();
}

}  // namespace valsize

namespace valsize::cli {

using nlohmann::json;

namespace {

std::string f3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Shortest representation that reads back to the same double.
std::string exact(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string count(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return f3(v);
}

std::string interval(const Interval& ci) { return "(" + f3(ci.low) + ", " + f3(ci.high) + ")"; }

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()));
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::string line;
      for (std::size_t i = 0; i < rows_[r].size(); ++i) {
        if (i) line += "  ";
        line += rows_[r][i];
        if (i + 1 < rows_[r].size()) line.append(width[i] - rows_[r][i].size(), ' ');
      }
      out << line << "\n";
      if (r == 0) {
        std::size_t total = 0;
        for (std::size_t w : width) total += w + 2;
        out << std::string(total - 2, '-') << "\n";
      }
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

bool is_measure(const std::string& name) { return parse_measure(name).has_value(); }

std::string n_events(const SampleSizeResult& r) {
  return std::to_string(r.n) + " (" + std::to_string(r.events) + ")";
}

void text_plan(const RunResult& res, std::ostream& out) {
  const SampleSizePlan& plan = *res.plan;

  // Threshold measures pivoted like a results table: one column per target.
  std::vector<double> targets;
  std::vector<std::pair<double, std::string>> keys;
  for (const auto& r : plan.criteria) {
    if (!is_measure(r.criterion)) continue;
    if (std::find(targets.begin(), targets.end(), r.target_se) == targets.end()) {
      targets.push_back(r.target_se);
    }
    const std::pair<double, std::string> key{r.threshold.value_or(0.0), r.criterion};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  if (!keys.empty()) {
    out << "Threshold measures: minimum N (events)\n\n";
    std::vector<std::string> header{"threshold", "measure", "value"};
    for (double se : targets) header.push_back("CIW " + f3(2 * kZ * se));
    Table t(header);
    for (const auto& [threshold, name] : keys) {
      std::vector<std::string> row{f3(threshold), name, ""};
      for (double se : targets) {
        auto it = std::find_if(plan.criteria.begin(), plan.criteria.end(), [&](const auto& r) {
          return r.criterion == name && r.threshold.value_or(0.0) == threshold && r.target_se == se;
        });
        if (it == plan.criteria.end()) {
          row.push_back("-");
        } else {
          row[2] = f3(it->value);
          row.push_back(n_events(*it));
        }
      }
      t.add(row);
    }
    t.print(out);
    out << "\n";
  }

  bool any_riley = false;
  Table riley({"criterion", "value", "CIW", "N (events)"});
  for (const auto& r : plan.criteria) {
    if (is_measure(r.criterion)) continue;
    any_riley = true;
    riley.add({criterion_label(r), f3(r.value), f3(display_ciw(r)), n_events(r)});
  }
  if (any_riley) {
    out << "Calibration, discrimination and net benefit\n\n";
    riley.print(out);
    out << "\n";
  }

  out << "Minimum sample size: " << plan.n << " (" << plan.events << " events at prevalence "
      << f3(plan.prevalence) << ")\n";
  out << "Driven by: ";
  for (std::size_t i = 0; i < plan.binding.size(); ++i) out << (i ? ", " : "") << plan.binding[i];
  out << "\n\n";
}

void text_inverse(const RunResult& res, std::ostream& out) {
  std::vector<double> thresholds;
  for (const auto& row : res.inverse) {
    if (std::find(thresholds.begin(), thresholds.end(), row.threshold) == thresholds.end()) {
      thresholds.push_back(row.threshold);
    }
  }
  out << "Expected 95% intervals at N = " << *res.at_n << "\n\n";
  std::vector<std::string> header{"measure"};
  for (double t : thresholds) {
    header.push_back("threshold " + f3(t));
    header.push_back("CIW");
  }
  Table table(header);
  for (Measure m : kAllMeasures) {
    std::vector<std::string> row{std::string(to_string(m))};
    bool any = false;
    for (double t : thresholds) {
      auto it = std::find_if(res.inverse.begin(), res.inverse.end(), [&](const InverseRow& r) {
        return r.threshold == t && r.estimate.kind == m;
      });
      if (it == res.inverse.end()) {
        row.insert(row.end(), {"-", "-"});
        continue;
      }
      any = true;
      row.push_back(f3(it->estimate.value) + " " + interval(it->estimate.ci));
      row.push_back(f3(it->estimate.ci.width()));
    }
    if (any) table.add(row);
  }
  table.print(out);
  out << "\n";
}

void text_survival(const SurvivalReport& rep, std::ostream& out) {
  for (const SizeSummary& s : rep.sizes) {
    out << "N = " << s.n << ": " << s.completed << " repetitions used, " << s.degenerate
        << " degenerate, mean events by horizon " << f3(s.mean_observed_events);
    if (s.clamp_events) out << ", " << s.clamp_events << " negative cells clamped";
    out << "\n\n";
    Table t({"measure", "mean estimate", "mean 95% CI", "mean CIW"});
    for (std::size_t m = 0; m < kAllMeasures.size(); ++m) {
      t.add({std::string(to_string(kAllMeasures[m])), f3(s.mean_estimate[m]),
             "(" + f3(s.mean_ci_low[m]) + ", " + f3(s.mean_ci_high[m]) + ")",
             f3(s.mean_width[m])});
    }
    t.print(out);
    out << "\n";
  }
}

void text_measures(const MeasuresSummary& ms, std::ostream& out) {
  out << ms.records << (ms.survival ? " survival records" : " predictions");
  if (ms.horizon) out << ", horizon " << f3(*ms.horizon);
  out << "\n\n";
  for (const MeasuresRow& row : ms.rows) {
    out << "Threshold " << f3(row.threshold) << ": TP " << count(row.cm.tp) << ", FP "
        << count(row.cm.fp) << ", TN " << count(row.cm.tn) << ", FN " << count(row.cm.fn);
    if (row.clamped_cells) out << " (" << row.clamped_cells << " cells clamped at 0)";
    out << "\n\n";
    Table t({"measure", "value", "SE", "95% CI", "CIW", "method"});
    for (const MeasureEstimate& e : row.estimates) {
      t.add({std::string(to_string(e.kind)), f3(e.value), f3(e.se), interval(e.ci),
             f3(e.ci.width()), std::string(to_string(e.method))});
    }
    t.print(out);
    for (const auto& u : row.undefined) out << "undefined: " << u << "\n";
    out << "\n";
  }
}

void text_provenance(const Provenance& p, std::ostream& out) {
  out << "seed " << p.seed;
  if (p.cohort_size) out << ", cohort " << *p.cohort_size;
  if (p.cohort_prevalence) out << " (prevalence " << f3(*p.cohort_prevalence) << ")";
  out << ", interval " << to_string(p.method) << ", valsize " << p.version << "\n";
}

json estimate_json(const MeasureEstimate& e) {
  return {{"measure", to_string(e.kind)}, {"value", e.value},        {"se", e.se},
          {"center", e.ci.center},        {"low", e.ci.low},         {"high", e.ci.high},
          {"width", e.ci.width()},        {"raw_width", e.ci.raw_width},
          {"method", to_string(e.method)}};
}

json cm_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

void csv_plan(const SampleSizePlan& plan, std::ostream& out) {
  out << "criterion,threshold,value,target_se,target_ciw,exact_n,n,events,achieved_se,achieved_ciw\n";
  for (const auto& r : plan.criteria) {
    out << r.criterion << "," << (r.threshold ? exact(*r.threshold) : "") << "," << exact(r.value)
        << "," << exact(r.target_se) << "," << exact(display_ciw(r)) << "," << exact(r.exact_n)
        << "," << r.n << "," << r.events << "," << exact(r.achieved_se) << ","
        << exact(r.achieved_ciw) << "\n";
  }
}

void csv_estimate(const MeasureEstimate& e, std::ostream& out) {
  out << to_string(e.kind) << "," << exact(e.value) << "," << exact(e.se) << "," << exact(e.ci.low)
      << "," << exact(e.ci.high) << "," << exact(e.ci.width()) << "," << to_string(e.method);
}

}  // namespace

double display_ciw(const SampleSizeResult& r) {
  if (r.criterion == "oe") return 2.0 * std::sinh(kZ * r.target_se);
  return 2.0 * kZ * r.target_se;
}

json to_json_document(const RunResult& res) {
  json doc;
  const Provenance& p = res.provenance;
  doc["provenance"] = {{"mode", to_string(p.mode)},
                       {"seed", p.seed},
                       {"cohort_size", p.cohort_size ? json(*p.cohort_size) : json(nullptr)},
                       {"cohort_prevalence",
                        p.cohort_prevalence ? json(*p.cohort_prevalence) : json(nullptr)},
                       {"interval_method", to_string(p.method)},
                       {"z", kZ},
                       {"version", p.version}};
  if (!res.anticipated.empty()) {
    json list = json::array();
    for (const auto& a : res.anticipated) {
      json item = {{"threshold", a.threshold}, {"prevalence", a.prevalence}};
      for (Measure m : kAllMeasures) {
        if (auto v = a.get(m)) item[std::string(to_string(m))] = *v;
      }
      list.push_back(item);
    }
    doc["anticipated"] = list;
  }
  if (res.plan) doc["plan"] = *res.plan;
  if (res.at_n) {
    json rows = json::array();
    for (const auto& r : res.inverse) {
      json item = estimate_json(r.estimate);
      item["threshold"] = r.threshold;
      rows.push_back(item);
    }
    doc["inverse"] = {{"n", *res.at_n}, {"rows", rows}};
  }
  if (res.survival) {
    json sizes = json::array();
    for (const SizeSummary& s : res.survival->sizes) {
      json measures = json::array();
      for (std::size_t m = 0; m < kAllMeasures.size(); ++m) {
        measures.push_back({{"measure", to_string(kAllMeasures[m])},
                            {"mean_estimate", s.mean_estimate[m]},
                            {"mean_low", s.mean_ci_low[m]},
                            {"mean_high", s.mean_ci_high[m]},
                            {"mean_width", s.mean_width[m]}});
      }
      sizes.push_back({{"n", s.n},
                       {"completed", s.completed},
                       {"degenerate", s.degenerate},
                       {"clamped_cells", s.clamp_events},
                       {"mean_observed_events", s.mean_observed_events},
                       {"measures", measures}});
    }
    doc["survival"] = {{"sizes", sizes}};
  }
  if (res.measures) {
    const MeasuresSummary& ms = *res.measures;
    json rows = json::array();
    for (const auto& row : ms.rows) {
      json est = json::array();
      for (const auto& e : row.estimates) est.push_back(estimate_json(e));
      rows.push_back({{"threshold", row.threshold},
                      {"confusion", cm_json(row.cm)},
                      {"clamped_cells", row.clamped_cells},
                      {"estimates", est},
                      {"undefined", row.undefined}});
    }
    doc["measures"] = {{"survival", ms.survival},
                       {"records", ms.records},
                       {"horizon", ms.horizon ? json(*ms.horizon) : json(nullptr)},
                       {"rows", rows}};
  }
  return doc;
}

std::string emit(const RunResult& res, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::Json:
      out << to_json_document(res).dump(2) << "\n";
      break;
    case OutputFormat::Text:
      if (res.plan) text_plan(res, out);
      if (res.at_n) text_inverse(res, out);
      if (res.survival) text_survival(*res.survival, out);
      if (res.measures) text_measures(*res.measures, out);
      text_provenance(res.provenance, out);
      break;
    case OutputFormat::Csv:
      if (res.plan) csv_plan(*res.plan, out);
      if (res.at_n) {
        out << "threshold,measure,value,se,low,high,width,method\n";
        for (const auto& r : res.inverse) {
          out << exact(r.threshold) << ",";
          csv_estimate(r.estimate, out);
          out << "\n";
        }
      }
      if (res.survival) {
        out << "n,measure,completed,degenerate,mean_events,mean_estimate,mean_low,mean_high,mean_width\n";
        for (const SizeSummary& s : res.survival->sizes) {
          for (std::size_t m = 0; m < kAllMeasures.size(); ++m) {
            out << s.n << "," << to_string(kAllMeasures[m]) << "," << s.completed << ","
                << s.degenerate << "," << exact(s.mean_observed_events) << ","
                << exact(s.mean_estimate[m]) << "," << exact(s.mean_ci_low[m]) << ","
                << exact(s.mean_ci_high[m]) << "," << exact(s.mean_width[m]) << "\n";
          }
        }
      }
      if (res.measures) {
        out << "threshold,measure,value,se,low,high,width,method,tp,fp,tn,fn\n";
        for (const auto& row : res.measures->rows) {
          for (const auto& e : row.estimates) {
            out << exact(row.threshold) << ",";
            csv_estimate(e, out);
            out << "," << exact(row.cm.tp) << "," << exact(row.cm.fp) << "," << exact(row.cm.tn)
                << "," << exact(row.cm.fn) << "\n";
          }
        }
      }
      break;
  }
  return out.str();
}

void write_raw_csv(const SurvivalReport& report, std::ostream& out) {
  out << "n,repetition,degenerate,clamped_cells,observed_events,tp,fp,tn,fn";
  for (Measure m : kAllMeasures) out << "," << to_string(m) << "," << to_string(m) << "_width";
  out << "\n";
  for (const RepetitionResult& r : report.raw) {
    out << r.n << "," << r.repetition << "," << (r.degenerate ? 1 : 0) << "," << r.clamped_cells
        << "," << exact(r.observed_events) << "," << exact(r.cm.tp) << "," << exact(r.cm.fp) << ","
        << exact(r.cm.tn) << "," << exact(r.cm.fn);
    for (const MeasureEstimate& e : r.estimates) {
      if (r.degenerate) {
        out << ",,";
      } else {
        out << "," << exact(e.value) << "," << exact(e.ci.raw_width);
      }
    }
    out << "\n";
  }
}

}  // namespace valsize::cli
