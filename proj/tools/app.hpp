#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "valsize/error.hpp"
#include "valsize/plan.hpp"
#include "valsize/survival.hpp"

namespace valsize::cli {

struct Provenance {
  Mode mode = Mode::Binary;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cohort_size;  // only when a cohort was simulated
  std::optional<double> cohort_prevalence;
  IntervalMethod method = IntervalMethod::Wald;
  std::string version;
};

struct InverseRow {
  double threshold = 0.0;
  MeasureEstimate estimate;
};

struct MeasuresRow {
  double threshold = 0.0;
  ConfusionMatrix cm;
  int clamped_cells = 0;
  std::vector<MeasureEstimate> estimates;  // measures that are defined
  std::vector<std::string> undefined;      // diagnostics for the rest
};

struct MeasuresSummary {
  bool survival = false;
  std::size_t records = 0;
  std::optional<double> horizon;
  std::vector<MeasuresRow> rows;
};

struct RunResult {
  Provenance provenance;
  std::vector<PerformanceAnticipation> anticipated;
  std::optional<SampleSizePlan> plan;
  std::optional<long> at_n;
  std::vector<InverseRow> inverse;
  std::optional<SurvivalReport> survival;
  std::optional<MeasuresSummary> measures;
};

/// Runs the configured mode. Throws valsize::Error on failure.
RunResult execute(const ScenarioConfig& config);

/// Reads `prob,outcome` or `time,event,risk` rows (header optional).
struct Predictions {
  bool survival = false;
  std::vector<double> probs;
  std::vector<int> outcomes;
  std::vector<SurvivalRecord> records;
};
Predictions read_predictions(std::istream& in);

/// Maps an error code to the process exit status.
int exit_code(ErrorCode code);

/// execute + emit; diagnostics go to err. Returns the exit status.
int run(const ScenarioConfig& config, std::ostream& out, std::ostream& err);

}  // namespace valsize::cli
