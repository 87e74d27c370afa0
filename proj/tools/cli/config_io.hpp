#pragma once

// Scenario configuration as an INI file. Sections mirror the parameter groups
// of the core library; any key left out keeps the preset value.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "franson/pipeline.hpp"

namespace franson::cli {

/// Presets selectable with `[scenario] preset = ...`.
ScenarioConfig preset(const std::string& name);

/// Applies `section.key = value` to the config. Throws ConfigError on an
/// unknown key or a value that does not parse.
void apply_setting(ScenarioConfig& config, const std::string& dotted_key, const std::string& value);

/// Preset from the file (if any), then every key in the file, then `overrides`
/// ("section.key=value"), then validation.
ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides);
ScenarioConfig load_config(std::istream& in, const std::vector<std::string>& overrides);

/// Fully resolved config; reading it back reproduces the same values.
void write_config(std::ostream& out, const ScenarioConfig& config);

}  // namespace franson::cli
