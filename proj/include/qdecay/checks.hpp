#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qdecay/observables.hpp"
#include "qdecay/scenario.hpp"

namespace qdecay {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

CheckResult make_check(std::string name, double value, double tolerance, std::string detail = {});

/// Closed box (absorber removed), `steps` steps at cfg.dt: | ||psi|| - 1 |.
CheckResult check_unitarity(const ScenarioConfig& cfg, std::size_t steps = 10000);

/// Re<H> at t=0 against the discrete sine eigenvalue (4/dx^2) sin^2(pi dx/2), tol 1e-9.
CheckResult check_initial_energy_discrete(const ScenarioConfig& cfg);

/// Re<H> at t=0 against pi^2, tol 1.5 pi^4 dx^2 / 12.
CheckResult check_initial_energy_continuum(const ScenarioConfig& cfg);

/// L2 gap at t=1 between the propagator and the sine-series solution for a
/// smooth packet in a V=0 box of length 4, on the mesh (dx/2, dt/2). Tol 1e-4.
CheckResult check_spectral_gap(const ScenarioConfig& cfg);

/// No-barrier run vs the free half-line oracle: max |dP(a,t)| at t = 0.5, 1, 2.
CheckResult check_free_halfline(const ScenarioConfig& cfg);

/// Same scenario on a doubled box with no absorber: sup |dP(a,t)|, tol 1e-4.
/// `trace` is the run of `cfg`.
CheckResult check_absorber_control(const ScenarioConfig& cfg, const DecayTrace& trace);

/// Fraction of a k = pi packet sent into a copy of the absorbing layer that
/// comes back, measured against a doubled box without absorber. Tol 1e-3.
CheckResult check_absorber_reflectance(const ScenarioConfig& cfg);

/// Largest matching residual over the poles of the configured barrier (if
/// h > pi^2) and the reference barriers. Tol 1e-10.
CheckResult check_pole_residuals(const ScenarioConfig& cfg);

/// Halving dx and dt: sup |dP(a,t)| over the shared sample times, tol 1e-3.
CheckResult check_self_convergence(const ScenarioConfig& cfg, const DecayTrace& trace);

/// Doubled box of the same mesh, absorber off.
ScenarioConfig doubled_box(const ScenarioConfig& cfg);

/// dx/2, dt/2, stride doubled so sample times coincide.
ScenarioConfig refined_mesh(const ScenarioConfig& cfg);

/// Runs every check above. Propagation failures are reported as failed checks.
std::vector<CheckResult> run_check_suite(const ScenarioConfig& cfg);

void print_check_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace qdecay
