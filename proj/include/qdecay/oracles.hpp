#pragma once

#include <functional>
#include <stdexcept>

#include "qdecay/scenario.hpp"

namespace qdecay {

/// Independent reference solutions used to validate the propagator. None of
/// them shares code with the finite-difference path.
namespace oracles {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Profile = std::function<complex(double)>;

/// sqrt(2) sin(pi x) on [0, 1]: the continuum initial state.
complex unit_box_ground_state(double x);

/// Free evolution on the half line x >= 0 with a hard wall at 0, by the
/// method of images:
///   psi(x,t) = int_0^L [K(x-x',t) - K(x+x',t)] psi0(x') dx',
///   K(xi,t) = (4 pi i t)^(-1/2) exp(i xi^2 / (4t)),
/// with (4 pi i t)^(-1/2) = (4 pi t)^(-1/2) exp(-i pi/4). Units hbar = 1, 2m = 1.
/// Integrals use 64-point Gauss-Legendre panels no wider than min(1, sqrt t)
/// and narrow enough that the kernel phase turns by at most ~40 rad per panel.
class FreeHalfLine {
public:
    explicit FreeHalfLine(Profile psi0 = unit_box_ground_state, double support = 1.0);

    /// Throws OracleError for t <= 0.
    complex amplitude(double x, double t) const;

    /// int_0^a |psi(x,t)|^2 dx.
    double probability_in(double a, double t) const;

private:
    Profile psi0_;
    double support_;
};

/// Closed box [0, L] with V = 0: psi(x,t) = sum c_n exp(-i (n pi/L)^2 t) sin(n pi x/L).
/// Coefficients are computed by quadrature; the series stops once
/// |c_n| < 1e-12 for 16 consecutive n, or at max_modes.
class ClosedBoxSpectral {
public:
    ClosedBoxSpectral(Profile psi0, double length, std::size_t max_modes = 4096);

    complex amplitude(double x, double t) const;

    std::size_t mode_count() const { return coeffs_.size(); }
    const std::vector<complex>& coefficients() const { return coeffs_; }

private:
    double length_;
    std::vector<complex> coeffs_;
};

/// Sample the spectral solution on the interior points of `grid` (grid.x_max is
/// the box length).
WaveFunction spectral_evolve_closed_box(const Profile& psi0, const GridSpec& grid, double t);

/// Outgoing-wave (Gamow) pole of the square-barrier well.
struct ResonancePole {
    complex k;
    complex energy;      // k^2
    double gamma = 0.0;  // probability decay rate, -2 Im(k^2)
    double residual = 0.0;
    int iterations = 0;
};

/// Matching condition at x = 1 + w for sin(kx) inside the well, continued
/// through the barrier, against a purely outgoing exp(ikx) outside. Scaled by
/// 1/cosh(kappa w), kappa = sqrt(h - k^2); even in kappa, so branch-free.
complex matching_function(complex k, double h, double w);
complex matching_derivative(complex k, double h, double w);

/// Complex Newton on matching_function. Seeded at the bound state of the
/// infinitely wide barrier (real k in (pi/2, pi) with k cos k + kappa sin k = 0).
/// Requires h > pi^2. Throws OracleError on non-convergence within 100
/// iterations or if the iterate leaves the lowest-resonance branch.
ResonancePole resonance_gamma(double h, double w);

}  // namespace oracles
}  // namespace qdecay
