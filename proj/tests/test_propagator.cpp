#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qdecay/hamiltonian.hpp"
#include "qdecay/propagator.hpp"
#include "support.hpp"

using namespace qdecay;
using std::numbers::pi;

TEST_SUITE("propagator") {

TEST_CASE("property: closed box preserves the norm for random states")
{
    std::mt19937_64 rng(5);
    GridSpec g{10.0, 1000};
    const auto h = build_hamiltonian(g, BarrierSpec{20.0, 0.6}, std::nullopt);
    for (int trial = 0; trial < 5; ++trial) {
        CrankNicolsonStepper s(h, 1e-3 * (trial + 1), testing::random_state(g, rng));
        s.advance(2000);
        REQUIRE(std::abs(norm_squared(s.state()) - 1.0) <= 1e-11);
    }
}

TEST_CASE("discrete sine mode picks up the exact Cayley phase")
{
    GridSpec g{1.0, 100};
    const auto h = build_hamiltonian(g, BarrierSpec{0.0, 0.5}, std::nullopt);
    const double dx = g.dx(), dt = 1e-3;
    const int n = 3;
    WaveFunction psi{g, 0.0, std::vector<complex>(g.interior_points())};
    for (std::size_t i = 1; i <= psi.values.size(); ++i) {
        psi.values[i - 1] = std::sin(n * pi * g.x(i));
    }
    const auto start = psi.values;
    const double s = std::sin(n * pi * dx / 2.0);
    const double lambda = 4.0 / (dx * dx) * s * s;
    const complex per_step = (1.0 - complex{0, 0.5 * lambda * dt}) / (1.0 + complex{0, 0.5 * lambda * dt});

    CrankNicolsonStepper st(h, dt, psi);
    st.advance(250);
    const complex phase = std::pow(per_step, 250);
    for (std::size_t i = 0; i < start.size(); ++i) {
        REQUIRE(std::abs(st.state().values[i] - phase * start[i]) <= 1e-11);
    }
    CHECK(st.time() == doctest::Approx(0.25));
    CHECK(st.steps_taken() == 250);
}

TEST_CASE("stepping backwards undoes a run")
{
    std::mt19937_64 rng(9);
    GridSpec g{10.0, 1000};
    const auto psi0 = testing::random_state(g, rng);
    CrankNicolsonStepper s(build_hamiltonian(g, BarrierSpec{10.0, 0.6}, std::nullopt), 5e-4, psi0);
    s.advance(500);
    s.set_dt(-5e-4);
    s.advance(500);
    double worst = 0.0;
    for (std::size_t i = 0; i < psi0.values.size(); ++i) {
        worst = std::max(worst, std::abs(s.state().values[i] - psi0.values[i]));
    }
    CHECK(worst <= 1e-10);
    CHECK(std::abs(s.time()) <= 1e-15);
}

TEST_CASE("absorber only removes probability")
{
    ScenarioConfig cfg = testing::small_config();
    cfg.grid = GridSpec{12.0, 1200};
    cfg.absorber.start = 8.0;
    cfg.t_end = 3.0;
    cfg.sample_stride = 20;
    const auto tr = run(cfg);
    for (std::size_t k = 1; k < tr.size(); ++k) {
        REQUIRE(tr.norm[k] <= tr.norm[k - 1] + 1e-14);
    }
    CHECK(tr.norm.back() < 0.9);
}

TEST_CASE("run samples t=0, every stride and t_end")
{
    ScenarioConfig cfg = testing::small_config(0.1);
    cfg.sample_stride = 30;
    std::vector<std::size_t> seen;
    const Observer obs = [&](const WaveFunction&, std::size_t step) { seen.push_back(step); };
    const auto tr = run(cfg, std::span(&obs, 1));
    // 200 steps: 0, 30, ..., 180, 200
    CHECK(tr.size() == 8);
    CHECK(seen == std::vector<std::size_t>{0, 30, 60, 90, 120, 150, 180, 200});
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.P.front() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tr.t.back() == doctest::Approx(0.1));
    CHECK(tr.cfg == cfg);
}

TEST_CASE("zero-length run gives a single sample")
{
    const auto tr = run(testing::small_config(0.0));
    CHECK(tr.size() == 1);
    CHECK(tr.P[0] == doctest::Approx(1.0));
    CHECK_FALSE(tr.g[0].has_value());
}

TEST_CASE("runs are deterministic")
{
    const auto cfg = testing::small_config(0.2);
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.P == b.P);
    CHECK(a.j_a == b.j_a);
    CHECK(a.energy == b.energy);
}

TEST_CASE("sampled current satisfies the discrete continuity identity")
{
    auto cfg = testing::small_config(1.0);
    cfg.barrier = BarrierSpec{0.0, 0.6};
    const auto tr = run(cfg);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
        const double dPdt = (tr.P[k + 1] - tr.P[k - 1]) / (tr.t[k + 1] - tr.t[k - 1]);
        worst = std::max(worst, std::abs(dPdt + tr.j_a[k]));
        scale = std::max(scale, std::abs(tr.j_a[k]));
    }
    CHECK(scale > 0.1);
    CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("non-finite input aborts at the first step")
{
    GridSpec g{10.0, 100};
    WaveFunction psi{g, 0.0, std::vector<complex>(g.interior_points())};
    psi.values[40] = std::numeric_limits<double>::quiet_NaN();
    CrankNicolsonStepper s(build_hamiltonian(g, BarrierSpec{0.0, 0.6}, std::nullopt), 1e-3, psi);
    try {
        s.advance(10);
        FAIL("expected NumericalAbort");
    } catch (const NumericalAbort& e) {
        CHECK(e.step() == 1);
        CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
}

TEST_CASE("invalid configuration is rejected before propagation")
{
    auto cfg = testing::small_config();
    cfg.barrier.width = 0.605;
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("mismatched state length is rejected")
{
    GridSpec g{10.0, 100};
    WaveFunction psi{g, 0.0, std::vector<complex>(5)};
    CHECK_THROWS_AS(CrankNicolsonStepper(build_hamiltonian(g, BarrierSpec{0.0, 0.6}, std::nullopt), 1e-3, psi),
                    std::invalid_argument);
}

}  // TEST_SUITE
