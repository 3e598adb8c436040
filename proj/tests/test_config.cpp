#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "qdecay/config_file.hpp"
#include "support.hpp"

using namespace qdecay;

TEST_SUITE("config") {

TEST_CASE("parse keys, comments and blank lines")
{
    std::istringstream in(R"(# fig 6 curve
barrier_height = 10
barrier_width=0.4

  t_end = 2.5
# probe_a = 9
n_cells=25000
)");
    const auto cfg = parse_config(in);
    CHECK(cfg.barrier.height == 10.0);
    CHECK(cfg.barrier.width == 0.4);
    CHECK(cfg.t_end == 2.5);
    CHECK(cfg.grid.n_cells == 25000);
    CHECK(cfg.probe_a == 4.0);
    CHECK(cfg.dt == 5e-4);
}

TEST_CASE("keys absent from the file keep the base value")
{
    ScenarioConfig base;
    base.absorber.strength = 7.0;
    std::istringstream in("barrier_height=20\n");
    const auto cfg = parse_config(in, base);
    CHECK(cfg.absorber.strength == 7.0);
    CHECK(cfg.barrier.height == 20.0);
}

TEST_CASE("parse errors are collected with line numbers")
{
    std::istringstream in("barrier_height=abc\nfoo=1\nbarrier_width=0.6\nnot a pair\n");
    try {
        parse_config(in);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.violations().size() == 3);
        CHECK(e.violations()[0].rfind("line 1: barrier_height", 0) == 0);
        CHECK(e.violations()[1].find("line 2: unknown key 'foo'") == 0);
        CHECK(e.violations()[2].find("line 4:") == 0);
    }
}

TEST_CASE("integer keys reject fractions and trailing junk")
{
    ScenarioConfig cfg;
    CHECK_THROWS_AS(set_config_value(cfg, "n_cells", "100.5"), ConfigError);
    CHECK_THROWS_AS(set_config_value(cfg, "sample_stride", "-3"), ConfigError);
    CHECK_THROWS_AS(set_config_value(cfg, "dt", "1e-3x"), ConfigError);
    CHECK_THROWS_AS(set_config_value(cfg, "dt", ""), ConfigError);
    set_config_value(cfg, "absorber_power", "3");
    CHECK(cfg.absorber.power == 3);
}

TEST_CASE("overrides")
{
    ScenarioConfig cfg;
    apply_override(cfg, "barrier_height=0");
    CHECK(cfg.barrier.height == 0.0);
    apply_override(cfg, " probe_a = 6 ");
    CHECK(cfg.probe_a == 6.0);
    CHECK_THROWS_AS(apply_override(cfg, "barrier_height"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "bogus=1"), ConfigError);
}

TEST_CASE("every key is formatted")
{
    const auto text = format_config(ScenarioConfig{});
    for (auto key : kConfigKeys) {
        CHECK(text.find(std::string(key) + "=") != std::string::npos);
    }
}

TEST_CASE("property: format then parse reproduces the config exactly")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        ScenarioConfig cfg;
        cfg.grid.x_max = 1.0 + 1000.0 * u(rng);
        cfg.grid.n_cells = 16 + static_cast<std::size_t>(1e6 * u(rng));
        cfg.dt = 1e-5 + u(rng) / 7.0;
        cfg.t_end = 10.0 * u(rng);
        cfg.barrier = BarrierSpec{100.0 * u(rng), u(rng) / 3.0};
        cfg.absorber = AbsorberSpec{400.0 * u(rng), 9.0 * u(rng), 2 + static_cast<int>(3 * u(rng))};
        cfg.probe_a = std::nextafter(4.0, 5.0) + u(rng);
        cfg.sample_stride = 1 + static_cast<std::size_t>(50 * u(rng));
        std::istringstream in(format_config(cfg));
        REQUIRE(parse_config(in) == cfg);
    }
}

TEST_CASE("missing file names the path")
{
    try {
        load_config("/nonexistent/dir/scenario.cfg");
        FAIL("expected FileError");
    } catch (const FileError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/scenario.cfg") != std::string::npos);
    }
}

TEST_CASE("load from disk")
{
    testing::TempDir dir("config");
    const auto path = dir.path / "s.cfg";
    std::ofstream(path) << "barrier_height=30\nbarrier_width=0.2\n";
    const auto cfg = load_config(path);
    CHECK(cfg.barrier == BarrierSpec{30.0, 0.2});
}

}  // TEST_SUITE
