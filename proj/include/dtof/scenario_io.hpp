#pragma once

#include "dtof/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace dtof {

inline constexpr int kScenarioSchemaVersion = 1;

/// Reads a scenario file (JSON). Values are in the customary units named by
/// each key suffix (`_mm`, `_ns`, `_pct`, `_deg`, `_mhz`, ...) and are
/// converted to SI. Unknown keys are rejected. Throws ConfigError on parse or
/// validation failure and IoError when the file cannot be read.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Same, from text. `base_dir` resolves relative spectrum paths.
ScenarioConfig parse_scenario(const std::string& text,
                              const std::filesystem::path& base_dir = {});

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});

DetectorChoice detector_from_json(const nlohmann::json& block);
nlohmann::ordered_json detector_to_json(const DetectorChoice& detector);

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path);

}  // namespace dtof
