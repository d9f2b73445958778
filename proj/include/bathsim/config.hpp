#pragma once

#include <map>
#include <string>
#include <vector>

#include "bathsim/engine.hpp"

namespace bathsim {

/// Flat key/value view of a SimConfig. Keys are lower-case identifiers.
using ConfigMap = std::map<std::string, std::string>;

/// Every recognised key, in a stable order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError on
/// malformed lines, unknown keys or duplicates.
ConfigMap parse_config_text(const std::string& text, const std::string& origin = "<text>");

/// Reads and parses a config file. Throws ConfigError if it cannot be read.
ConfigMap read_config_file(const std::string& path);

/// Values from BATHSIM_<KEY> environment variables.
ConfigMap environment_overrides();

/// Parses `key=value` override strings.
ConfigMap parse_overrides(const std::vector<std::string>& assignments);

/// Applies the entries of `values` on top of `config`. Throws ConfigError on
/// unknown keys or unparsable values, then validates the result.
SimConfig apply_config(SimConfig config, const ConfigMap& values);

/// Serialises every key; doubles use 17 significant digits so that
/// apply_config(SimConfig{}, to_config_map(c)) reproduces c exactly.
ConfigMap to_config_map(const SimConfig& config);

/// Defaults, then file (if non-empty path), then environment, then overrides.
SimConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace bathsim
