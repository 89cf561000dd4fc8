#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ale/sim_config.hpp"

namespace ale::harness {

/// Names of the shipped presets.
std::vector<std::string> preset_names();
/// Preset configuration (validated). Throws ConfigError for an unknown name.
SimConfig preset(const std::string& name);

/// Builds a config from JSON: an optional "preset" supplies the base, remaining keys
/// override it, then validate() runs. Unknown keys and type mismatches are ConfigErrors
/// naming the field.
SimConfig config_from_json(const nlohmann::json& j);
/// Canonical JSON with every field written out (resolved sigma included for reference).
nlohmann::json config_to_json(const SimConfig& cfg);

/// Parse + config_from_json; parse errors report line and column.
SimConfig load_config(const std::filesystem::path& path);
SimConfig parse_config(const std::string& text);
void save_config(const SimConfig& cfg, const std::filesystem::path& path);

/// Resolves sigma from the rule and checks every guard (t_zeta, n_alpha, grid sizes, ...).
void validate(SimConfig& cfg);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const SimConfig& cfg);

}  // namespace ale::harness
