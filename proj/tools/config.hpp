#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valsize/anticipation.hpp"
#include "valsize/measures.hpp"
#include "valsize/riskdist.hpp"
#include "valsize/samplesize.hpp"
#include "valsize/survival.hpp"

namespace valsize::cli {

enum class Mode { Binary, BinaryInverse, Survival, Measures };
enum class OutputFormat { Text, Json, Csv };

std::string_view to_string(Mode m);
std::string_view to_string(OutputFormat f);

struct RileySpec {
  std::optional<double> prevalence;  // defaults to the cohort or anticipated prevalence
  std::optional<double> cstatistic;
  std::optional<PrecisionTarget> cstat_target;   // kind is ignored
  std::optional<PrecisionTarget> oe_target;      // CIW on the O/E scale or SE of ln(O/E)
  std::optional<PrecisionTarget> slope_target;
  std::optional<PrecisionTarget> snb_target;
};

struct ScenarioConfig {
  Mode mode = Mode::Binary;
  std::optional<RiskDistribution> risk;
  std::vector<double> thresholds;
  std::vector<PerformanceAnticipation> anticipated;
  std::vector<PrecisionTarget> targets;
  std::optional<RileySpec> riley;
  IntervalMethod method = IntervalMethod::Wald;
  std::uint64_t seed = kDefaultSeed;
  std::size_t cohort_size = kDefaultCohortSize;
  std::optional<long> at_n;
  OutputFormat format = OutputFormat::Text;

  std::optional<SurvivalScenario> survival;
  std::optional<std::string> raw_csv;

  std::optional<std::string> predictions;
  std::optional<double> horizon;
};

/// Seed used when neither the command line nor the config supplies one:
/// VALSIZE_SEED if set and numeric, else kDefaultSeed.
std::uint64_t default_seed();

/// Parses a config document. Relative file references resolve against
/// base_dir. Errors are ErrorCode::Config with the offending field path.
ScenarioConfig parse_config(const nlohmann::json& doc,
                            const std::filesystem::path& base_dir = {});

ScenarioConfig load_config(const std::filesystem::path& file);

/// Cross-field checks: thresholds in (0, 1), at least one target or a fixed N,
/// and the inputs each mode needs.
void validate(const ScenarioConfig& config);

}  // namespace valsize::cli
