#include "qdecay/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace qdecay {

namespace {

std::size_t probe_point(const WaveFunction& psi, double a)
{
    const std::size_t p = psi.grid.require_point(a, "probe point");
    if (p == 0 || p >= psi.grid.n_cells) {
        throw std::invalid_argument("probe point must be an interior grid point");
    }
    return p;
}

// Amplitude at grid point p (0 and n_cells are the walls).
complex at(const WaveFunction& psi, std::size_t p)
{
    if (p == 0 || p >= psi.grid.n_cells) {
        return {0.0, 0.0};
    }
    return psi.values[p - 1];
}

}  // namespace

double nonescape_probability(const WaveFunction& psi, double a)
{
    const std::size_t p = psi.grid.require_point(a, "probe point");
    if (p == 0) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < p; ++i) {
        sum += std::norm(at(psi, i));
    }
    sum += 0.5 * std::norm(at(psi, p));
    return sum * psi.grid.dx();
}

double nonescape_probability_simpson(const WaveFunction& psi, double a)
{
    const std::size_t p = psi.grid.require_point(a, "probe point");
    if (p % 2 != 0) {
        throw std::invalid_argument("Simpson quadrature needs an even number of cells up to a");
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < p; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * std::norm(at(psi, i));
    }
    sum += std::norm(at(psi, p));
    return sum * psi.grid.dx() / 3.0;
}

double face_flux(const WaveFunction& psi, std::size_t point)
{
    const complex prod = std::conj(at(psi, point)) * at(psi, point + 1);
    return 2.0 / psi.grid.dx() * prod.imag();
}

double probability_current(const WaveFunction& psi, double a)
{
    return stencil_current(probe_stencil(psi, a));
}

ProbeStencil probe_stencil(const WaveFunction& psi, double a)
{
    const std::size_t p = probe_point(psi, a);
    return ProbeStencil{{at(psi, p - 1), at(psi, p), at(psi, p + 1)}, psi.grid.dx()};
}

double stencil_current(const ProbeStencil& s)
{
    const double left = (std::conj(s.values[0]) * s.values[1]).imag();
    const double right = (std::conj(s.values[1]) * s.values[2]).imag();
    return (left + right) / s.dx;
}

ProbeStencil midpoint(const ProbeStencil& before, const ProbeStencil& after)
{
    ProbeStencil out{{}, before.dx};
    for (std::size_t i = 0; i < 3; ++i) {
        out.values[i] = 0.5 * (before.values[i] + after.values[i]);
    }
    return out;
}

std::vector<std::optional<double>> log_derivative(std::span<const double> t, std::span<const double> P,
                                                  double floor)
{
    const std::size_t n = t.size();
    if (P.size() != n) {
        throw std::invalid_argument("log_derivative: t and P lengths differ");
    }
    if (n < 3) {
        throw std::invalid_argument("log_derivative: need at least 3 samples");
    }

    std::size_t valid = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(P[k] >= floor)) {
            valid = k;
            break;
        }
    }

    std::vector<std::optional<double>> g(n);
    if (valid < 2) {
        return g;
    }
    std::vector<double> lp(valid);
    for (std::size_t k = 0; k < valid; ++k) {
        lp[k] = std::log(P[k]);
    }

    g[0] = (lp[1] - lp[0]) / (t[1] - t[0]);
    for (std::size_t k = 1; k + 1 < valid; ++k) {
        g[k] = (lp[k + 1] - lp[k - 1]) / (t[k + 1] - t[k - 1]);
    }
    g[valid - 1] = (lp[valid - 1] - lp[valid - 2]) / (t[valid - 1] - t[valid - 2]);
    return g;
}

std::vector<std::optional<double>> g_from_current(const DecayTrace& trace, double floor)
{
    std::vector<std::optional<double>> g(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (!(trace.P[k] >= floor)) {
            break;
        }
        g[k] = -trace.j_a[k] / trace.P[k];
    }
    return g;
}

TraceRecorder::TraceRecorder(ScenarioConfig cfg, const TridiagonalOperator& hamiltonian)
    : h_(&hamiltonian)
{
    trace_.cfg = std::move(cfg);
}

void TraceRecorder::record(const WaveFunction& psi, double current)
{
    const double a = trace_.cfg.probe_a;
    trace_.t.push_back(psi.t);
    trace_.P.push_back(nonescape_probability(psi, a));
    trace_.j_a.push_back(current);
    trace_.norm.push_back(norm_squared(psi));
    trace_.energy.push_back(energy_expectation(*h_, psi));
}

void TraceRecorder::set_last_current(double current)
{
    trace_.j_a.back() = current;
}

DecayTrace TraceRecorder::finish()
{
    if (trace_.size() >= 3) {
        trace_.g = log_derivative(trace_.t, trace_.P);
    } else {
        trace_.g.assign(trace_.size(), std::nullopt);
    }
    return std::move(trace_);
}

}  // namespace qdecay
