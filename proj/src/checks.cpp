#include "qdecay/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "qdecay/hamiltonian.hpp"
#include "qdecay/oracles.hpp"
#include "qdecay/propagator.hpp"

namespace qdecay {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t steps_for(double duration, double dt)
{
    return static_cast<std::size_t>(std::llround(duration / dt));
}

GridSpec grid_of_length(double length, double dx)
{
    return GridSpec{length, static_cast<std::size_t>(std::llround(length / dx))};
}

// Largest |P_a - P_b| over sample times the two traces share.
double sup_gap(const DecayTrace& a, const DecayTrace& b, double time_tol, std::size_t* matched)
{
    double gap = 0.0;
    std::size_t j = 0, count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (j < b.size() && b.t[j] < a.t[i] - time_tol) {
            ++j;
        }
        if (j < b.size() && std::abs(b.t[j] - a.t[i]) <= time_tol) {
            gap = std::max(gap, std::abs(a.P[i] - b.P[j]));
            ++count;
        }
    }
    if (matched) {
        *matched = count;
    }
    return gap;
}

std::string fmt(const char* format, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

CheckResult guarded(const std::string& name, double tolerance, const std::function<CheckResult()>& body)
{
    try {
        return body();
    } catch (const NumericalAbort& e) {
        return CheckResult{name, NAN, tolerance, false, fmt("numerical abort at step %zu: %s", e.step(), e.what())};
    } catch (const std::exception& e) {
        return CheckResult{name, NAN, tolerance, false, e.what()};
    }
}

}  // namespace

CheckResult make_check(std::string name, double value, double tolerance, std::string detail)
{
    const bool ok = std::isfinite(value) && value <= tolerance;
    return CheckResult{std::move(name), value, tolerance, ok, std::move(detail)};
}

ScenarioConfig doubled_box(const ScenarioConfig& cfg)
{
    ScenarioConfig out = cfg;
    out.grid.x_max *= 2.0;
    out.grid.n_cells *= 2;
    out.absorber.strength = 0.0;
    return out;
}

ScenarioConfig refined_mesh(const ScenarioConfig& cfg)
{
    ScenarioConfig out = cfg;
    out.grid.n_cells *= 2;
    out.dt /= 2.0;
    out.sample_stride *= 2;
    return out;
}

CheckResult check_unitarity(const ScenarioConfig& cfg, std::size_t steps)
{
    const char* name = "unitarity (closed box)";
    return guarded(name, 1e-10, [&] {
        require_valid(cfg);
        CrankNicolsonStepper stepper(build_hamiltonian(cfg.grid, cfg.barrier, std::nullopt), cfg.dt,
                                     initial_wavefunction(cfg.grid));
        stepper.advance(steps);
        const double err = std::abs(std::sqrt(norm_squared(stepper.state())) - 1.0);
        return make_check(name, err, 1e-10, fmt("%zu steps", steps));
    });
}

CheckResult check_initial_energy_discrete(const ScenarioConfig& cfg)
{
    const char* name = "initial energy vs discrete eigenvalue";
    return guarded(name, 1e-9, [&] {
        require_valid(cfg);
        const double dx = cfg.grid.dx();
        const double s = std::sin(pi * dx / 2.0);
        const double lambda = 4.0 / (dx * dx) * s * s;
        const auto psi = initial_wavefunction(cfg.grid);
        const double e = energy_expectation(build_hamiltonian(cfg), psi).real();
        return make_check(name, std::abs(e - lambda), 1e-9, fmt("Re<H>=%.12f", e));
    });
}

CheckResult check_initial_energy_continuum(const ScenarioConfig& cfg)
{
    const char* name = "initial energy vs pi^2";
    const double dx = cfg.grid.dx();
    const double tol = std::pow(pi, 4) * dx * dx / 12.0 * 1.5;
    return guarded(name, tol, [&] {
        require_valid(cfg);
        const auto psi = initial_wavefunction(cfg.grid);
        const double e = energy_expectation(build_hamiltonian(cfg), psi).real();
        return make_check(name, std::abs(e - pi * pi), tol, fmt("Re<H>=%.12f", e));
    });
}

CheckResult check_spectral_gap(const ScenarioConfig& cfg)
{
    const char* name = "closed-box spectral gap";
    constexpr double length = 6.0, t_final = 1.0;
    constexpr double centre = 3.0, sigma = 0.6, k0 = 0.0;
    return guarded(name, 1e-4, [&] {
        const double dx = cfg.grid.dx() / 2.0;
        const double dt = cfg.dt / 2.0;
        const GridSpec grid = grid_of_length(length, dx);
        const double amp = 1.0 / std::sqrt(sigma * std::sqrt(pi));
        const oracles::Profile packet = [=](double x) {
            const double u = (x - centre) / sigma;
            return amp * std::exp(-0.5 * u * u) * std::polar(1.0, k0 * x);
        };
        WaveFunction psi{grid, 0.0, std::vector<complex>(grid.interior_points())};
        for (std::size_t i = 1; i <= grid.interior_points(); ++i) {
            psi.values[i - 1] = packet(grid.x(i));
        }
        const std::size_t steps = steps_for(t_final, dt);
        CrankNicolsonStepper stepper(build_hamiltonian(grid, BarrierSpec{0.0, 1.0}, std::nullopt), dt,
                                     std::move(psi));
        stepper.advance(steps);
        const auto ref = oracles::spectral_evolve_closed_box(packet, grid, stepper.time());
        double sum = 0.0;
        for (std::size_t i = 0; i < ref.values.size(); ++i) {
            sum += std::norm(stepper.state().values[i] - ref.values[i]);
        }
        const double gap = std::sqrt(sum * grid.dx());
        return make_check(name, gap, 1e-4, fmt("L=%g dx=%g dt=%g t=%g", length, dx, dt, stepper.time()));
    });
}

CheckResult check_free_halfline(const ScenarioConfig& cfg)
{
    const char* name = "free half-line oracle";
    return guarded(name, 1e-3, [&] {
        ScenarioConfig free = cfg;
        free.barrier.height = 0.0;
        free.sample_stride = 1;
        free.t_end = static_cast<double>(steps_for(2.0, cfg.dt)) * cfg.dt;
        const DecayTrace trace = run(free);
        const oracles::FreeHalfLine oracle;
        double gap = 0.0;
        std::string detail;
        for (double t : {0.5, 1.0, 2.0}) {
            const auto k = steps_for(t, cfg.dt);
            const double d = std::abs(trace.P.at(k) - oracle.probability_in(cfg.probe_a, trace.t[k]));
            gap = std::max(gap, d);
            detail += fmt("%st=%g:%.2e", detail.empty() ? "" : " ", t, d);
        }
        return make_check(name, gap, 1e-3, detail);
    });
}

CheckResult check_absorber_control(const ScenarioConfig& cfg, const DecayTrace& trace)
{
    const char* name = "absorber vs doubled box";
    return guarded(name, 1e-4, [&] {
        const DecayTrace control = run(doubled_box(cfg));
        std::size_t matched = 0;
        const double gap = sup_gap(trace, control, cfg.dt / 4.0, &matched);
        return make_check(name, gap, 1e-4, fmt("%zu samples", matched));
    });
}

CheckResult check_absorber_reflectance(const ScenarioConfig& cfg)
{
    const char* name = "absorber reflectance";
    constexpr double layer_start = 40.0, centre = 20.0, sigma = 2.0, k0 = pi;
    return guarded(name, 1e-3, [&] {
        const double width = cfg.grid.x_max - cfg.absorber.start;
        const double dx = cfg.grid.dx();
        const AbsorberSpec layer{layer_start, cfg.absorber.strength, cfg.absorber.power};
        const GridSpec grid = grid_of_length(layer_start + width, dx);
        const GridSpec reference = grid_of_length(2.0 * (layer_start + width), dx);
        // Long enough for the reflected peak to come back to about x = centre.
        const double t_final = (60.0 + 2.0 * width) / (2.0 * k0);
        const std::size_t steps = steps_for(t_final, cfg.dt);

        const auto packet = [&](const GridSpec& g) {
            WaveFunction psi{g, 0.0, std::vector<complex>(g.interior_points())};
            for (std::size_t i = 1; i <= g.interior_points(); ++i) {
                const double u = (g.x(i) - centre) / sigma;
                psi.values[i - 1] = std::exp(-0.5 * u * u) * std::polar(1.0, k0 * g.x(i));
            }
            const double n = std::sqrt(norm_squared(psi));
            for (auto& v : psi.values) {
                v /= n;
            }
            return psi;
        };
        const BarrierSpec none{0.0, 1.0};
        CrankNicolsonStepper absorbing(build_hamiltonian(grid, none, layer), cfg.dt, packet(grid));
        CrankNicolsonStepper closed(build_hamiltonian(reference, none, std::nullopt), cfg.dt, packet(reference));
        absorbing.advance(steps);
        closed.advance(steps);

        const double back = nonescape_probability(absorbing.state(), layer_start);
        const double stay = nonescape_probability(closed.state(), layer_start);
        const double sent = 1.0 - stay;
        const double r = std::max(0.0, back - stay) / sent;
        return make_check(name, r, 1e-3, fmt("sent %.3f into the layer", sent));
    });
}

CheckResult check_pole_residuals(const ScenarioConfig& cfg)
{
    const char* name = "resonance pole residuals";
    return guarded(name, 1e-10, [&] {
        std::vector<BarrierSpec> barriers = {{10, 0.6}, {20, 0.6}, {30, 0.6}, {15, 0.8}, {15, 1.8},
                                             {10, 0.2}, {20, 0.2}, {30, 0.2}, {10, 0.4}};
        if (cfg.barrier.height > pi * pi) {
            barriers.push_back(cfg.barrier);
        }
        double worst = 0.0;
        for (const auto& b : barriers) {
            worst = std::max(worst, oracles::resonance_gamma(b.height, b.width).residual);
        }
        return make_check(name, worst, 1e-10, fmt("%zu poles", barriers.size()));
    });
}

CheckResult check_self_convergence(const ScenarioConfig& cfg, const DecayTrace& trace)
{
    const char* name = "self-convergence (dx/2, dt/2)";
    return guarded(name, 1e-3, [&] {
        const ScenarioConfig fine = refined_mesh(cfg);
        require_valid(fine);
        const DecayTrace refined = run(fine);
        std::size_t matched = 0;
        const double gap = sup_gap(trace, refined, cfg.dt / 4.0, &matched);
        return make_check(name, gap, 1e-3, fmt("dx=%g dt=%g, %zu samples", fine.grid.dx(), fine.dt, matched));
    });
}

std::vector<CheckResult> run_check_suite(const ScenarioConfig& cfg)
{
    std::vector<CheckResult> out;
    out.push_back(check_unitarity(cfg));
    out.push_back(check_initial_energy_discrete(cfg));
    out.push_back(check_initial_energy_continuum(cfg));
    out.push_back(check_spectral_gap(cfg));
    out.push_back(check_free_halfline(cfg));
    out.push_back(check_pole_residuals(cfg));
    out.push_back(check_absorber_reflectance(cfg));

    std::optional<DecayTrace> trace;
    std::string failure;
    try {
        trace = run(cfg);
    } catch (const NumericalAbort& e) {
        failure = fmt("numerical abort at step %zu: %s", e.step(), e.what());
    } catch (const std::exception& e) {
        failure = e.what();
    }
    if (trace) {
        out.push_back(check_absorber_control(cfg, *trace));
        out.push_back(check_self_convergence(cfg, *trace));
    } else {
        out.push_back(CheckResult{"absorber vs doubled box", NAN, 1e-4, false, failure});
        out.push_back(CheckResult{"self-convergence (dx/2, dt/2)", NAN, 1e-3, false, failure});
    }
    return out;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& results)
{
    std::size_t width = 5;
    for (const auto& r : results) {
        width = std::max(width, r.name.size());
    }
    out << fmt("%-*s  %-10s  %-10s  %s\n", static_cast<int>(width), "check", "value", "tolerance", "result");
    for (const auto& r : results) {
        out << fmt("%-*s  %-10.3e  %-10.3e  %s", static_cast<int>(width), r.name.c_str(), r.value, r.tolerance,
                   r.passed ? "PASS" : "FAIL");
        if (!r.detail.empty()) {
            out << "  (" << r.detail << ")";
        }
        out << '\n';
    }
}

}  // namespace qdecay
