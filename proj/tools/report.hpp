#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "app.hpp"

namespace valsize {

// Structured (de)serialisation, found by nlohmann through ADL.
void to_json(nlohmann::json& j, const SampleSizeResult& r);
void from_json(const nlohmann::json& j, SampleSizeResult& r);
void to_json(nlohmann::json& j, const SampleSizePlan& p);
void from_json(const nlohmann::json& j, SampleSizePlan& p);

}  // namespace valsize

namespace valsize::cli {

/// Width on the reported scale: the O/E interval for "oe", 2 * z * se otherwise.
double display_ciw(const SampleSizeResult& r);

nlohmann::json to_json_document(const RunResult& result);

std::string emit(const RunResult& result, OutputFormat format);

/// One row per (size, repetition) with cells and every measure's value and width.
void write_raw_csv(const SurvivalReport& report, std::ostream& out);

}  // namespace valsize::cli
