#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace hinf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "hinf";
inline constexpr const char* kToolVersion = "0.1.0";

/// ball, rips, homology, ends, tower, fill-at-infinity, nerve, cech-tower,
/// divergence-check, subdivision-check.
const std::vector<std::string>& command_names();

/// Checks field types and ranges, rejects unknown fields, fills defaults. The
/// result is the config echo: running it again reproduces the payload exactly.
Json normalize_config(const std::string& command, const Json& config);

/// Runs one command and wraps the result:
///
///     { tool, version, command, config, timing: {seconds}, diagnostics: {cache, warnings}, payload }
///
/// Only `timing` and `diagnostics` may differ between runs of the same config.
Json run(const std::string& command, const Json& config);

/// The tower rank matrix as CSV: header "m\\n,<n>...", one row per source m,
/// empty cells where m <= n.
std::string tower_csv(const Json& payload);

}  // namespace hinf
