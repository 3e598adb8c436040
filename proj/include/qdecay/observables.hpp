#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qdecay/hamiltonian.hpp"
#include "qdecay/scenario.hpp"

namespace qdecay {

/// Samples below this nonescape probability have no log-derivative.
inline constexpr double kProbabilityFloor = 1e-12;

/// Sampled time series for one run. All arrays share the length of `t`.
struct DecayTrace {
    std::vector<double> t;
    std::vector<double> P;                  // nonescape probability P(a, t)
    std::vector<std::optional<double>> g;   // d ln P / dt; nullopt where not computable
    std::vector<double> j_a;                // probability current at a, positive = outward
    std::vector<double> norm;               // ||psi||^2
    std::vector<complex> energy;            // <psi|H|psi>
    ScenarioConfig cfg;

    std::size_t size() const { return t.size(); }
};

/// Trapezoid of |psi|^2 over [0, a]; a must be a grid point.
double nonescape_probability(const WaveFunction& psi, double a);

/// Current through x = a: mean of the discrete fluxes (2/dx) Im(conj(psi_i) psi_{i+1})
/// on the two cell faces adjacent to a. This is the flux that makes the
/// trapezoid P(a) obey dP/dt = -j exactly for the semi-discrete equation.
double probability_current(const WaveFunction& psi, double a);

/// Flux on the single cell face between grid points i and i+1.
double face_flux(const WaveFunction& psi, std::size_t point);

/// Amplitudes at the grid points a-dx, a, a+dx. Enough to evaluate the
/// current at a without copying the whole state.
struct ProbeStencil {
    std::array<complex, 3> values{};
    double dx = 0.0;
};

ProbeStencil probe_stencil(const WaveFunction& psi, double a);

/// Same formula as probability_current, on a stencil.
double stencil_current(const ProbeStencil& s);

/// Stencil of (psi_before + psi_after) / 2. The Crank-Nicolson step conserves
/// probability locally with the flux of this time-centered state:
/// P(t+dt) - P(t) = -dt * stencil_current(midpoint(before, after)).
ProbeStencil midpoint(const ProbeStencil& before, const ProbeStencil& after);

/// g = d ln P / dt over a sampled series: central differences inside, one-sided
/// at the ends. From the first sample with P < floor onward g is nullopt.
/// Throws std::invalid_argument for fewer than 3 samples.
std::vector<std::optional<double>> log_derivative(std::span<const double> t, std::span<const double> P,
                                                  double floor = kProbabilityFloor);

/// Flux route to g: -j/P per sample (nullopt below the floor).
std::vector<std::optional<double>> g_from_current(const DecayTrace& trace, double floor = kProbabilityFloor);

/// Composite Simpson of |psi|^2 over [0, a] (even number of cells); cross-check
/// for the trapezoid.
double nonescape_probability_simpson(const WaveFunction& psi, double a);

/// Collects per-sample observables during a run and assembles the trace.
class TraceRecorder {
public:
    TraceRecorder(ScenarioConfig cfg, const TridiagonalOperator& hamiltonian);

    /// Appends P, norm and energy of psi and the current j_a (passed in, since
    /// the run computes it from time-centered states).
    void record(const WaveFunction& psi, double current);

    /// Overwrites the current of the most recent sample.
    void set_last_current(double current);

    /// Computes g from the recorded P series and returns the trace.
    DecayTrace finish();

private:
    const TridiagonalOperator* h_;
    DecayTrace trace_;
};

}  // namespace qdecay
