#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdecay/hamiltonian.hpp"
#include "support.hpp"

using namespace qdecay;
using std::numbers::pi;

TEST_SUITE("hamiltonian") {

TEST_CASE("stencil coefficients")
{
    GridSpec g{10.0, 100};
    const auto h = build_hamiltonian(g, BarrierSpec{10.0, 0.6}, std::nullopt);
    REQUIRE(h.size() == 99);
    REQUIRE(h.off.size() == 98);
    CHECK(h.diag[0].real() == doctest::Approx(2.0 / 0.01));
    CHECK(h.diag[10].real() == doctest::Approx(2.0 / 0.01 + 10.0));  // x = 1.1
    CHECK(h.off[0].real() == doctest::Approx(-1.0 / 0.01));
}

TEST_CASE("sine modes are eigenvectors with the discrete eigenvalue")
{
    GridSpec g{1.0, 200};
    const auto h = build_hamiltonian(g, BarrierSpec{0.0, 0.5}, std::nullopt);
    const double dx = g.dx();
    for (int n = 1; n <= 5; ++n) {
        std::vector<complex> mode(g.interior_points());
        for (std::size_t i = 1; i <= mode.size(); ++i) {
            mode[i - 1] = std::sin(n * pi * g.x(i));
        }
        const double s = std::sin(n * pi * dx / 2.0);
        const double lambda = 4.0 / (dx * dx) * s * s;
        const auto hm = qdecay::apply(h, mode);
        for (std::size_t i = 0; i < mode.size(); ++i) {
            REQUIRE(std::abs(hm[i] - lambda * mode[i]) <= 1e-9 * lambda);
        }
    }
}

TEST_CASE("property: real potential gives a Hermitian operator")
{
    std::mt19937_64 rng(3);
    GridSpec g{5.0, 500};
    const auto h = build_hamiltonian(g, BarrierSpec{15.0, 0.8}, std::nullopt);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testing::random_state(g, rng);
        const auto b = testing::random_state(g, rng);
        const complex ab = inner_product(g, a.values, qdecay::apply(h, b.values));
        const complex ba = inner_product(g, b.values, qdecay::apply(h, a.values));
        REQUIRE(std::abs(ab - std::conj(ba)) <= 1e-10 * std::abs(ab));
    }
}

TEST_CASE("absorber enters as a negative imaginary diagonal")
{
    ScenarioConfig cfg = testing::small_config();
    const auto h = build_hamiltonian(cfg);
    const std::size_t i = *cfg.grid.point_at(45.0);
    CHECK(h.diag[i - 1].imag() < 0.0);
    CHECK(h.diag[*cfg.grid.point_at(30.0) - 1].imag() == 0.0);
    const auto psi = initial_wavefunction(cfg.grid);
    CHECK(energy_expectation(h, psi).imag() == doctest::Approx(0.0));
}

TEST_CASE("initial energy approaches pi^2 at second order in dx")
{
    auto error = [](std::size_t n_cells) {
        GridSpec g{10.0, n_cells};
        const auto psi = initial_wavefunction(g);
        const auto h = build_hamiltonian(g, BarrierSpec{10.0, 0.6}, std::nullopt);
        return std::abs(energy_expectation(h, psi).real() - pi * pi);
    };
    const double e1 = error(500), e2 = error(1000), e3 = error(2000);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e2 / e3 >= 3.5);
    CHECK(e2 / e3 <= 4.5);
}

TEST_CASE("initial energy equals the discrete ground-state eigenvalue")
{
    GridSpec g;
    const auto psi = initial_wavefunction(g);
    const double dx = g.dx();
    const double s = std::sin(pi * dx / 2.0);
    const auto e = energy_expectation(build_hamiltonian(g, BarrierSpec{}, AbsorberSpec{}), psi);
    CHECK(std::abs(e.real() - 4.0 / (dx * dx) * s * s) <= 1e-9);
    CHECK(std::abs(e.real() - pi * pi) <= std::pow(pi, 4) * dx * dx / 12.0 * 1.5);
}

TEST_CASE("size mismatch is rejected")
{
    GridSpec g{10.0, 100};
    const auto h = build_hamiltonian(g, BarrierSpec{0.0, 0.6}, std::nullopt);
    std::vector<complex> wrong(10);
    CHECK_THROWS_AS(qdecay::apply(h, wrong), std::invalid_argument);
}

}  // TEST_SUITE
