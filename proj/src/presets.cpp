#include "qdecay/presets.hpp"

#include <sstream>

namespace qdecay {

namespace {

Scenario make(const ScenarioConfig& base, double h, double w, std::string style)
{
    ScenarioConfig cfg = base;
    cfg.barrier = BarrierSpec{h, w};
    return Scenario{scenario_name(cfg.barrier), std::move(style), cfg};
}

}  // namespace

std::string scenario_name(const BarrierSpec& barrier)
{
    if (barrier.height == 0.0) {
        return "nobarrier";
    }
    std::ostringstream os;
    os << "h" << barrier.height << "_w" << barrier.width;
    return os.str();
}

const char* quantity_name(Quantity q)
{
    return q == Quantity::P ? "P" : "g";
}

std::vector<std::string> preset_names()
{
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "nobarrier"};
}

Preset expand_preset(std::string_view name, const ScenarioConfig& base)
{
    Preset p;
    p.name = std::string(name);
    if (name == "fig1") {
        p.quantity = Quantity::P;
        p.scenarios = {make(base, 10, 0.6, "solid")};
    } else if (name == "fig2") {
        p.scenarios = {make(base, 10, 0.6, "solid"), make(base, 20, 0.6, "dashed"),
                       make(base, 30, 0.6, "dot-dashed")};
    } else if (name == "fig3") {
        p.scenarios = {make(base, 15, 0.6, "solid"), make(base, 15, 0.8, "dashed"),
                       make(base, 15, 1.8, "dot-dashed")};
    } else if (name == "fig4") {
        p.scenarios = {make(base, 0, 0.2, "solid"), make(base, 10, 0.2, "dashed"),
                       make(base, 20, 0.2, "dot-dashed"), make(base, 30, 0.2, "dotted")};
    } else if (name == "fig5") {
        p.quantity = Quantity::P;
        p.scenarios = {make(base, 0, 0.2, "solid"), make(base, 10, 0.2, "dashed")};
    } else if (name == "fig6") {
        p.scenarios = {make(base, 0, 0.2, "solid"), make(base, 10, 0.2, "dashed"),
                       make(base, 10, 0.4, "dot-dashed"), make(base, 10, 0.6, "dotted")};
    } else if (name == "nobarrier") {
        p.quantity = Quantity::P;
        p.scenarios = {make(base, 0, 0.6, "solid")};
    } else {
        throw ConfigError({"unknown preset '" + std::string(name) + "'"});
    }
    return p;
}

}  // namespace qdecay
