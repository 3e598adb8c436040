#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qdecay/scenario.hpp"

namespace qdecay {

/// One curve of a figure preset.
struct Scenario {
    std::string name;   // e.g. "h10_w0.6", "nobarrier"
    std::string style;  // solid, dashed, dot-dashed, dotted
    ScenarioConfig cfg;
};

enum class Quantity { P, g };

struct Preset {
    std::string name;
    Quantity quantity = Quantity::g;
    std::vector<Scenario> scenarios;
};

/// fig1 .. fig6 and nobarrier.
std::vector<std::string> preset_names();

/// Expands a preset on top of `base` (mesh and numerical settings). Throws
/// ConfigError for an unknown name.
Preset expand_preset(std::string_view name, const ScenarioConfig& base = {});

/// "h10_w0.6" or "nobarrier" for h == 0.
std::string scenario_name(const BarrierSpec& barrier);

const char* quantity_name(Quantity q);

}  // namespace qdecay
