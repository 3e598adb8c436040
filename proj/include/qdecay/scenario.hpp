#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdecay {

using complex = std::complex<double>;

/// Raised when a scenario or grid violates its invariants. Carries every
/// violation found, not only the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Uniform mesh on [0, x_max] with Dirichlet ends. Interior points are
/// x_i = i*dx for i = 1..n_cells-1; array index of point i is i-1.
struct GridSpec {
    double x_max = 500.0;
    std::size_t n_cells = 50000;

    double dx() const { return x_max / static_cast<double>(n_cells); }
    std::size_t interior_points() const { return n_cells - 1; }
    double x(std::size_t point) const { return static_cast<double>(point) * dx(); }

    /// Grid point index (0..n_cells) that coincides with `coord`, or nullopt
    /// when `coord` is off-grid or outside [0, x_max].
    std::optional<std::size_t> point_at(double coord) const;

    /// As point_at, but throws ConfigError naming `what` when misaligned.
    std::size_t require_point(double coord, const std::string& what) const;

    bool operator==(const GridSpec&) const = default;
};

/// Square barrier of height h on [1, 1+w]. h == 0 means no barrier.
struct BarrierSpec {
    double height = 10.0;
    double width = 0.6;

    static constexpr double inner_edge = 1.0;
    double outer_edge() const { return inner_edge + width; }

    bool operator==(const BarrierSpec&) const = default;
};

/// Imaginary ramp -i*strength*((x - start)/(x_max - start))^power for x >= start.
/// strength == 0 disables the layer (hard wall at x_max).
struct AbsorberSpec {
    double start = 490.0;
    double strength = 5.0;
    int power = 2;

    bool operator==(const AbsorberSpec&) const = default;
};

struct ScenarioConfig {
    GridSpec grid;
    BarrierSpec barrier;
    AbsorberSpec absorber;
    double dt = 5e-4;
    double t_end = 4.0;
    double probe_a = 4.0;
    std::size_t sample_stride = 1;

    /// Number of time steps t_end/dt, rounded to the nearest integer.
    std::size_t step_count() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Complex amplitudes on the interior points of `grid` at time t.
struct WaveFunction {
    GridSpec grid;
    double t = 0.0;
    std::vector<complex> values;
};

/// Every violated invariant of `cfg`; empty means valid.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

/// Throws ConfigError if validate_config reports anything.
void require_valid(const ScenarioConfig& cfg);

/// V(x_i) - i*Gamma_abs(x_i) on interior points. Barrier points strictly
/// inside (1, 1+w) get h, the two edge points h/2, which keeps the step
/// edges at x = 1 and 1+w to second order in dx. Pass nullopt (or strength 0)
/// for no absorber.
std::vector<complex> sample_potential(const GridSpec& grid, const BarrierSpec& barrier,
                                      const std::optional<AbsorberSpec>& absorber);

/// sqrt(2) sin(pi x) on (0, 1], zero beyond, renormalized to unit discrete norm.
WaveFunction initial_wavefunction(const GridSpec& grid);

/// Discrete L2 norm squared, dx * sum |psi_i|^2 (trapezoid with zero walls).
double norm_squared(const WaveFunction& psi);

}  // namespace qdecay
