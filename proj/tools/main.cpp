#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "app.hpp"
#include "config.hpp"
#include "valsize/error.hpp"
#include "valsize/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string method;

  // binary
  std::vector<double> beta;
  std::string risk_file;
  std::vector<double> thresholds;
  std::vector<std::string> measures;
  std::vector<double> ciw;
  std::vector<double> se;
  std::optional<long> at_n;
  std::optional<std::size_t> cohort_size;
  std::optional<double> prevalence;
  std::optional<double> cstatistic;
  std::optional<double> cstatistic_ciw;
  std::optional<double> oe_ciw;
  std::optional<double> slope_ciw;
  std::optional<double> snb_ciw;

  // survival
  bool builtin = false;
  std::optional<std::size_t> repetitions;
  std::vector<std::size_t> sizes;
  std::string raw_csv;

  // measures
  std::string predictions;
  std::optional<double> horizon;
};

void common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config, "Scenario config document (JSON)");
  cmd->add_option("--seed", o.seed, "Random seed (overrides config and VALSIZE_SEED)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
}

std::string absolute(const std::string& path) { return fs::absolute(path).string(); }

// Flags are layered over the config document so both go through one validator.
json build_document(const std::string& command, const Options& o, fs::path& base_dir) {
  json doc = json::object();
  base_dir = fs::current_path();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw valsize::Error(valsize::ErrorCode::Config, o.config + ": cannot open config document");
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw valsize::Error(valsize::ErrorCode::Config, o.config + ": " + e.what());
    }
    if (!doc.is_object()) throw valsize::Error(valsize::ErrorCode::Config, o.config + ": expected an object");
    base_dir = fs::absolute(o.config).parent_path();
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (!o.format.empty()) doc["format"] = o.format;
  if (!o.method.empty()) doc["interval_method"] = o.method;
  if (!o.thresholds.empty()) doc["thresholds"] = o.thresholds;

  if (command == "binary") {
    if (o.beta.size() == 2) doc["risk_distribution"] = {{"beta", {{"a", o.beta[0]}, {"b", o.beta[1]}}}};
    if (!o.risk_file.empty()) doc["risk_distribution"] = {{"empirical_file", absolute(o.risk_file)}};
    if (o.cohort_size) doc["cohort_size"] = *o.cohort_size;
    if (!o.ciw.empty() || !o.se.empty()) {
      json targets = json::array();
      const std::vector<std::string> names =
          o.measures.empty() ? std::vector<std::string>{"all"} : o.measures;
      for (const auto& name : names) {
        if (!o.ciw.empty()) targets.push_back({{"measure", name}, {"ciw", o.ciw}});
        if (!o.se.empty()) targets.push_back({{"measure", name}, {"se", o.se}});
      }
      doc["targets"] = targets;
    }
    auto riley = [&](const char* key, const std::optional<double>& v) {
      if (v) doc["riley"][key] = *v;
    };
    riley("prevalence", o.prevalence);
    riley("cstatistic", o.cstatistic);
    riley("cstatistic_ciw", o.cstatistic_ciw);
    riley("oe_ciw", o.oe_ciw);
    riley("slope_ciw", o.slope_ciw);
    riley("snb_ciw", o.snb_ciw);
    if (o.at_n) doc["at_n"] = *o.at_n;
    doc["mode"] = doc.contains("at_n") ? "binary_inverse" : "binary";
  } else if (command == "survival") {
    json& s = doc["survival"];
    if (s.is_null()) s = json::object();
    if (o.builtin || o.config.empty()) s["builtin"] = true;
    if (o.repetitions) s["repetitions"] = *o.repetitions;
    if (!o.sizes.empty()) s["sizes"] = o.sizes;
    if (!o.raw_csv.empty()) s["raw_csv"] = absolute(o.raw_csv);
    doc["mode"] = "survival";
  } else {
    if (!o.predictions.empty()) doc["predictions"] = absolute(o.predictions);
    if (o.horizon) doc["horizon"] = *o.horizon;
    doc["mode"] = "measures";
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum sample sizes for external validation of risk prediction models"};
  app.set_version_flag("--version", std::string(valsize::kVersion));
  app.require_subcommand(1);
  Options o;

  auto* binary = app.add_subcommand("binary", "Solve for N (or intervals at a fixed N) for a binary outcome");
  common_flags(binary, o);
  binary->add_option("--beta", o.beta, "Beta risk distribution parameters a,b")
      ->expected(2)->delimiter(',');
  binary->add_option("--risk-file", o.risk_file, "File of predicted probabilities, one per line");
  binary->add_option("--thresholds", o.thresholds, "Classification thresholds")->delimiter(',');
  binary->add_option("--measures", o.measures, "Measures to target (default: all)")->delimiter(',');
  binary->add_option("--ciw", o.ciw, "Target confidence interval width(s)")->delimiter(',');
  binary->add_option("--se", o.se, "Target standard error(s)")->delimiter(',');
  binary->add_option("--at-n", o.at_n, "Report expected intervals at this N instead of solving");
  binary->add_option("--method", o.method, "Interval method")
      ->check(CLI::IsMember({"wald", "agresti_coull", "agresti-coull"}));
  binary->add_option("--cohort-size", o.cohort_size, "Simulated cohort size");
  binary->add_option("--prevalence", o.prevalence, "Outcome prevalence for the calibration criteria");
  binary->add_option("--cstatistic", o.cstatistic, "Anticipated c-statistic");
  binary->add_option("--cstatistic-ciw", o.cstatistic_ciw, "Target width for the c-statistic");
  binary->add_option("--oe-ciw", o.oe_ciw, "Target width for O/E");
  binary->add_option("--slope-ciw", o.slope_ciw, "Target width for the calibration slope");
  binary->add_option("--snb-ciw", o.snb_ciw, "Target width for standardised net benefit");

  auto* survival = app.add_subcommand("survival", "Simulate interval widths at candidate sizes");
  common_flags(survival, o);
  survival->add_flag("--builtin", o.builtin, "Use the built-in scenario");
  survival->add_option("--repetitions", o.repetitions, "Repetitions per candidate size");
  survival->add_option("--sizes", o.sizes, "Candidate sample sizes")->delimiter(',');
  survival->add_option("--raw-csv", o.raw_csv, "Write per-repetition results to this file");

  auto* measures = app.add_subcommand("measures", "Estimate measures and intervals from a predictions file");
  common_flags(measures, o);
  measures->add_option("-p,--predictions", o.predictions, "CSV with prob,outcome or time,event,risk");
  measures->add_option("--thresholds", o.thresholds, "Classification thresholds")->delimiter(',');
  measures->add_option("--horizon", o.horizon, "Time horizon for survival predictions");
  measures->add_option("--method", o.method, "Interval method")
      ->check(CLI::IsMember({"wald", "agresti_coull", "agresti-coull"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  valsize::cli::ScenarioConfig config;
  try {
    fs::path base_dir;
    const json doc = build_document(command, o, base_dir);
    config = valsize::cli::parse_config(doc, base_dir);
  } catch (const valsize::Error& e) {
    std::cerr << "valsize: " << e.what() << "\n";
    return valsize::cli::exit_code(e.code());
  } catch (const json::exception& e) {
    std::cerr << "valsize: " << e.what() << "\n";
    return 2;
  }
  return valsize::cli::run(config, std::cout, std::cerr);
}
