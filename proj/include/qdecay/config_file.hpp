#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qdecay/scenario.hpp"

namespace qdecay {

/// Keys accepted in scenario files and --set overrides.
inline constexpr std::string_view kConfigKeys[] = {
    "x_max",           "n_cells",           "dt",
    "t_end",           "barrier_height",    "barrier_width",
    "absorber_start",  "absorber_strength", "absorber_power",
    "probe_a",         "sample_stride",
};

/// Assign one key. Throws ConfigError on an unknown key or unparsable value.
void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Parse "key=value" into cfg (used for --set overrides).
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

/// Flat key=value text; '#' starts a comment line; blank lines ignored.
/// Keys not present keep their value from `base`.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});

/// Throws FileError if the path cannot be opened.
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

/// Every key, one per line, 17 significant digits. parse_config of this text
/// reproduces `cfg` exactly.
std::string format_config(const ScenarioConfig& cfg);

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qdecay
