#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "qdecay/observables.hpp"
#include "qdecay/scenario.hpp"

namespace qdecay::testing {

// 50-unit box on the default mesh spacing; cheap enough for unit tests.
inline ScenarioConfig small_config(double t_end = 0.25)
{
    ScenarioConfig cfg;
    cfg.grid = GridSpec{50.0, 5000};
    cfg.absorber.start = 40.0;
    cfg.t_end = t_end;
    return cfg;
}

// Trace sampled on t_k = k*dt from a closed-form P(t); g from log_derivative.
inline DecayTrace synthetic_trace(double dt, std::size_t n, const std::function<double(double)>& P)
{
    DecayTrace tr;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        tr.t.push_back(t);
        tr.P.push_back(P(t));
        tr.j_a.push_back(0.0);
        tr.norm.push_back(1.0);
        tr.energy.emplace_back(0.0, 0.0);
    }
    tr.g = log_derivative(tr.t, tr.P);
    return tr;
}

inline WaveFunction random_state(const GridSpec& grid, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    WaveFunction psi{grid, 0.0, std::vector<complex>(grid.interior_points())};
    for (auto& v : psi.values) {
        v = {d(rng), d(rng)};
    }
    const double n = std::sqrt(norm_squared(psi));
    for (auto& v : psi.values) {
        v /= n;
    }
    return psi;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag)
    {
        static std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() / ("qdecay_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace qdecay::testing
