#include <doctest.h>

#include "qdecay/presets.hpp"

using namespace qdecay;

namespace {

struct Curve {
    double h, w;
    const char* style;
};

struct Row {
    const char* name;
    Quantity quantity;
    std::vector<Curve> curves;
};

}  // namespace

TEST_SUITE("presets") {

TEST_CASE("figure presets carry the caption parameters")
{
    const std::vector<Row> table = {
        {"fig1", Quantity::P, {{10, 0.6, "solid"}}},
        {"fig2", Quantity::g, {{10, 0.6, "solid"}, {20, 0.6, "dashed"}, {30, 0.6, "dot-dashed"}}},
        {"fig3", Quantity::g, {{15, 0.6, "solid"}, {15, 0.8, "dashed"}, {15, 1.8, "dot-dashed"}}},
        {"fig4", Quantity::g, {{0, 0.2, "solid"}, {10, 0.2, "dashed"}, {20, 0.2, "dot-dashed"}, {30, 0.2, "dotted"}}},
        {"fig5", Quantity::P, {{0, 0.2, "solid"}, {10, 0.2, "dashed"}}},
        {"fig6", Quantity::g, {{0, 0.2, "solid"}, {10, 0.2, "dashed"}, {10, 0.4, "dot-dashed"}, {10, 0.6, "dotted"}}},
        {"nobarrier", Quantity::P, {{0, 0.6, "solid"}}},
    };
    CHECK(preset_names().size() == table.size());
    for (const auto& row : table) {
        INFO(row.name);
        const auto p = expand_preset(row.name);
        CHECK(p.name == row.name);
        CHECK(p.quantity == row.quantity);
        REQUIRE(p.scenarios.size() == row.curves.size());
        for (std::size_t i = 0; i < row.curves.size(); ++i) {
            const auto& s = p.scenarios[i];
            CHECK(s.cfg.barrier.height == row.curves[i].h);
            CHECK(s.cfg.barrier.width == row.curves[i].w);
            CHECK(s.style == row.curves[i].style);
            CHECK(s.cfg.probe_a == 4.0);
            CHECK(s.cfg.t_end == 4.0);
            CHECK(validate_config(s.cfg).empty());
        }
    }
}

TEST_CASE("scenario names")
{
    CHECK(scenario_name(BarrierSpec{10, 0.6}) == "h10_w0.6");
    CHECK(scenario_name(BarrierSpec{15, 1.8}) == "h15_w1.8");
    CHECK(scenario_name(BarrierSpec{0, 0.2}) == "nobarrier");
    const auto p = expand_preset("fig6");
    CHECK(p.scenarios[0].name == "nobarrier");
    CHECK(p.scenarios[3].name == "h10_w0.6");
}

TEST_CASE("expansion keeps the base numerics and is deterministic")
{
    ScenarioConfig base;
    base.grid.n_cells = 25000;
    base.dt = 1e-3;
    base.t_end = 2.0;
    const auto a = expand_preset("fig2", base);
    const auto b = expand_preset("fig2", base);
    for (std::size_t i = 0; i < a.scenarios.size(); ++i) {
        CHECK(a.scenarios[i].cfg == b.scenarios[i].cfg);
        CHECK(a.scenarios[i].cfg.grid.n_cells == 25000);
        CHECK(a.scenarios[i].cfg.dt == 1e-3);
        CHECK(a.scenarios[i].cfg.t_end == 2.0);
    }
}

TEST_CASE("unknown preset")
{
    CHECK_THROWS_AS(expand_preset("fig7"), ConfigError);
    CHECK_THROWS_AS(expand_preset(""), ConfigError);
}

}  // TEST_SUITE
