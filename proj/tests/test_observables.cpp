#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdecay/hamiltonian.hpp"
#include "qdecay/observables.hpp"
#include "support.hpp"

using namespace qdecay;

namespace {

WaveFunction from(const GridSpec& g, auto f)
{
    WaveFunction psi{g, 0.0, std::vector<complex>(g.interior_points())};
    for (std::size_t i = 1; i <= psi.values.size(); ++i) {
        psi.values[i - 1] = f(g.x(i));
    }
    return psi;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("trapezoid nonescape probability")
{
    GridSpec g{10.0, 1000};
    const auto flat = from(g, [](double) { return complex{1.0, 0.0}; });
    // psi(0) = 0 by the wall: dx * (sum over 399 points + 1/2).
    CHECK(nonescape_probability(flat, 4.0) == doctest::Approx(4.0 - 0.005).epsilon(1e-13));
    CHECK(nonescape_probability(initial_wavefunction(g), 4.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(nonescape_probability(initial_wavefunction(g), 0.5) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK_THROWS_AS(nonescape_probability(flat, 4.003), ConfigError);
}

TEST_CASE("Simpson and trapezoid agree on a smooth density")
{
    GridSpec g{10.0, 1000};
    const auto psi = from(g, [](double x) { return complex{std::exp(-(x - 3) * (x - 3)), 0.0}; });
    CHECK(nonescape_probability_simpson(psi, 4.0) ==
          doctest::Approx(nonescape_probability(psi, 4.0)).epsilon(1e-5));
    const double exact = std::sqrt(std::numbers::pi / 2.0) / 2.0 * (std::erf(std::sqrt(2.0)) + std::erf(3.0 * std::sqrt(2.0)));
    CHECK(nonescape_probability_simpson(psi, 4.0) == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("plane wave current")
{
    GridSpec g{10.0, 1000};
    const double k = 3.0, dx = g.dx();
    const auto psi = from(g, [&](double x) { return std::polar(1.0, k * x); });
    const double expected = 2.0 * std::sin(k * dx) / dx;
    CHECK(face_flux(psi, 400) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(probability_current(psi, 4.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(stencil_current(probe_stencil(psi, 4.0)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(2.0 * k).epsilon(1e-3));

    const auto back = from(g, [&](double x) { return std::polar(1.0, -k * x); });
    CHECK(probability_current(back, 4.0) == doctest::Approx(-expected).epsilon(1e-12));
}

TEST_CASE("real states carry no current")
{
    GridSpec g{10.0, 1000};
    CHECK(probability_current(initial_wavefunction(g), 0.5) == 0.0);
}

TEST_CASE("midpoint stencil")
{
    ProbeStencil a{{complex{1, 0}, complex{0, 2}, complex{3, 3}}, 0.1};
    ProbeStencil b{{complex{3, 0}, complex{0, 0}, complex{1, -1}}, 0.1};
    const auto m = midpoint(a, b);
    CHECK(m.values[0] == complex{2, 0});
    CHECK(m.values[1] == complex{0, 1});
    CHECK(m.values[2] == complex{2, 1});
    CHECK(m.dx == 0.1);
}

TEST_CASE("log-derivative of an exponential and a Gaussian")
{
    const auto ex = testing::synthetic_trace(0.01, 300, [](double t) { return std::exp(-0.7 * t); });
    for (const auto& g : ex.g) {
        REQUIRE(g.has_value());
        REQUIRE(*g == doctest::Approx(-0.7).epsilon(1e-9));
    }
    const auto ga = testing::synthetic_trace(0.01, 300, [](double t) { return std::exp(-t * t / 5.0); });
    for (std::size_t k = 1; k + 1 < ga.size(); ++k) {
        REQUIRE(*ga.g[k] == doctest::Approx(-2.0 * ga.t[k] / 5.0).epsilon(1e-9));
    }
    // One-sided ends are first order.
    CHECK(std::abs(*ga.g.front()) <= 0.01 / 5.0 + 1e-12);
}

TEST_CASE("g is missing from the first sample below the floor")
{
    const auto tr = testing::synthetic_trace(0.1, 100, [](double t) { return std::exp(-5.0 * t); });
    // exp(-5 t) < 1e-12 from t = 5.6
    for (std::size_t k = 0; k < tr.size(); ++k) {
        if (tr.t[k] < 5.5) {
            REQUIRE(tr.g[k].has_value());
        } else if (tr.t[k] > 5.55) {
            REQUIRE_FALSE(tr.g[k].has_value());
        }
    }
    // Later samples back above the floor stay missing; the last valid one is one-sided.
    std::vector<double> t{0, 1, 2, 3, 4}, P{1, 0.5, 1e-13, 0.4, 0.3};
    const auto g = log_derivative(t, P);
    CHECK(*g[0] == doctest::Approx(std::log(0.5)));
    CHECK(*g[1] == doctest::Approx(std::log(0.5)));
    for (std::size_t k = 2; k < g.size(); ++k) {
        CHECK_FALSE(g[k].has_value());
    }
    std::vector<double> P1{1, 1e-13, 0.5, 0.4, 0.3};
    for (const auto& v : log_derivative(t, P1)) {
        CHECK_FALSE(v.has_value());  // one valid sample has no derivative
    }
}

TEST_CASE("log-derivative needs three samples")
{
    std::vector<double> t{0, 1}, P{1, 0.5};
    CHECK_THROWS_AS(log_derivative(t, P), std::invalid_argument);
}

TEST_CASE("flux route to g")
{
    DecayTrace tr;
    tr.t = {0, 1, 2};
    tr.P = {1.0, 0.5, 1e-13};
    tr.j_a = {0.0, 0.25, 1.0};
    const auto g = g_from_current(tr);
    CHECK(*g[0] == 0.0);
    CHECK(*g[1] == -0.5);
    CHECK_FALSE(g[2].has_value());
}

}  // TEST_SUITE
