#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "app.hpp"
#include "config.hpp"
#include "report.hpp"
#include "valsize/error.hpp"

using namespace valsize;
using namespace valsize::cli;
using nlohmann::json;

namespace {

json small_binary() {
  return json::parse(R"({
    "mode": "binary",
    "risk_distribution": {"beta": {"a": 1.33, "b": 1.75}},
    "cohort_size": 20000,
    "seed": 17,
    "thresholds": [0.1, 0.3],
    "targets": [{"measure": "all", "ciw": [0.08, 0.1, 0.12]}]
  })");
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  return "";
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config errors carry field paths") {
  auto doc = small_binary();
  doc["thresholds"] = {0.1, 1.5};
  CHECK(config_error(doc).find("$.thresholds[1]") != std::string::npos);

  doc = small_binary();
  doc["targets"][0]["measure"] = "auc";
  CHECK(config_error(doc).find("$.targets[0].measure") != std::string::npos);

  doc = small_binary();
  doc["colour"] = "red";
  CHECK(config_error(doc).find("$.colour") != std::string::npos);

  doc = small_binary();
  doc.erase("targets");
  CHECK(config_error(doc).find("$.targets") != std::string::npos);

  doc = small_binary();
  doc["risk_distribution"] = {{"beta", {{"a", -1}, {"b", 2}}}};
  CHECK(config_error(doc).find("$.risk_distribution.beta.a") != std::string::npos);
}

TEST_CASE("target lists expand per measure and width") {
  const auto c = parse_config(small_binary());
  CHECK(c.targets.size() == 18);
  CHECK(c.seed == 17);
}

TEST_CASE("plan serialisation round-trips") {
  const auto result = execute(parse_config(small_binary()));
  REQUIRE(result.plan.has_value());
  const json j = *result.plan;
  const SampleSizePlan back = json::parse(j.dump()).get<SampleSizePlan>();
  CHECK(back == *result.plan);
}

TEST_CASE("structured output is deterministic") {
  const auto c = parse_config(small_binary());
  CHECK(emit(execute(c), OutputFormat::Json) == emit(execute(c), OutputFormat::Json));
}

TEST_CASE("delimited output has one row per measure, threshold and target") {
  auto c = parse_config(small_binary());
  c.format = OutputFormat::Csv;
  const std::string csv = emit(execute(c), OutputFormat::Csv);
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1 + 6 * 2 * 3);
}

TEST_CASE("text numbers appear unrounded in the structured report") {
  const auto result = execute(parse_config(small_binary()));
  const std::string text = emit(result, OutputFormat::Text);
  const json doc = to_json_document(result);
  CHECK(text.find(std::to_string(doc["plan"]["n"].get<long>())) != std::string::npos);
  for (const auto& r : doc["plan"]["criteria"]) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r["value"].get<double>());
    CHECK(text.find(buf) != std::string::npos);
  }
}

TEST_CASE("run maps failures to exit codes") {
  std::ostringstream out, err;
  ScenarioConfig ok = parse_config(small_binary());
  CHECK(run(ok, out, err) == 0);

  ScenarioConfig bad = ok;
  bad.thresholds = {1.5};
  CHECK(run(bad, out, err) == 2);

  ScenarioConfig numeric = ok;
  numeric.risk.reset();
  numeric.thresholds.clear();
  PerformanceAnticipation a;
  a.threshold = 0.2;
  a.prevalence = 0.3;
  a.accuracy = 0.8;
  numeric.anticipated = {a};
  numeric.targets = {{Measure::NPV, TargetMode::CIW, 0.1}};
  err.str("");
  CHECK(run(numeric, out, err) == 3);
  CHECK(err.str().find("npv @ 0.2") != std::string::npos);

  ScenarioConfig sim;
  sim.mode = Mode::Survival;
  sim.survival = builtin_survival_scenario();
  sim.survival->sizes = {2};
  sim.survival->repetitions = 2;
  CHECK(run(sim, out, err) == 4);
}

TEST_CASE("predictions reader") {
  std::istringstream binary("prob,outcome\n0.2,0\n0.8,1\n");
  const auto p = read_predictions(binary);
  CHECK_FALSE(p.survival);
  CHECK(p.probs.size() == 2);
  std::istringstream surv("time,event,risk\n1.5,1,0.3\n2.0,0,0.1\n");
  CHECK(read_predictions(surv).survival);
  std::istringstream bad("prob,outcome\n0.2,3\n");
  CHECK_THROWS_AS(read_predictions(bad), Error);
}

TEST_CASE("command line: exit codes, seeds and determinism") {
  const std::string exe = VALSIZE_EXE;
  const auto dir = std::filesystem::temp_directory_path() / "valsize_cli_test";
  std::filesystem::create_directories(dir);
  const std::string base = exe + " binary --beta 1.33,1.75 --cohort-size 5000 --thresholds 0.1 --ciw 0.1";

  CHECK(shell(base + " > /dev/null") == 0);
  CHECK(shell(exe + " binary --beta 1.33,1.75 --thresholds 1.5 --ciw 0.1 2> /dev/null") == 2);
  CHECK(shell(exe + " binary --unknown-flag 2> /dev/null") == 2);
  CHECK(shell(exe + " survival --sizes 2 --repetitions 2 2> /dev/null") == 4);

  const auto a = dir / "a.json", b = dir / "b.json", env = dir / "env.json", flag = dir / "flag.json";
  CHECK(shell(base + " --format json > " + a.string()) == 0);
  CHECK(shell(base + " --format json > " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));

  CHECK(shell("VALSIZE_SEED=5 " + base + " --format json > " + env.string()) == 0);
  CHECK(json::parse(slurp(env))["provenance"]["seed"] == 5);
  CHECK(shell("VALSIZE_SEED=5 " + base + " --seed 9 --format json > " + flag.string()) == 0);
  CHECK(json::parse(slurp(flag))["provenance"]["seed"] == 9);

  const auto preds = dir / "preds.csv";
  {
    std::ofstream out(preds);
    out << "prob,outcome\n0.9,1\n0.8,1\n0.3,0\n0.6,0\n0.2,1\n0.1,0\n";
  }
  CHECK(shell(exe + " measures -p " + preds.string() + " --thresholds 0.5 > /dev/null") == 0);
  std::filesystem::remove_all(dir);
}
