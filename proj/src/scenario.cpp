#include "qdecay/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qdecay {

namespace {

std::string join_violations(const std::vector<std::string>& violations)
{
    std::ostringstream os;
    os << "invalid configuration";
    for (const auto& v : violations) {
        os << "\n  - " << v;
    }
    return os.str();
}

// Relative to dx; grid coordinates are products i*dx and carry rounding.
constexpr double kAlignTolerance = 1e-6;

constexpr std::size_t kMaxSteps = 10'000'000;

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations))
{
}

std::optional<std::size_t> GridSpec::point_at(double coord) const
{
    if (!(x_max > 0.0) || n_cells == 0 || !std::isfinite(coord)) {
        return std::nullopt;
    }
    const double scaled = coord / dx();
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > kAlignTolerance) {
        return std::nullopt;
    }
    if (nearest < 0.0 || nearest > static_cast<double>(n_cells)) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(nearest);
}

std::size_t GridSpec::require_point(double coord, const std::string& what) const
{
    if (auto p = point_at(coord)) {
        return *p;
    }
    std::ostringstream os;
    os << what << " x=" << coord << " is not a grid point (dx=" << dx() << ")";
    throw ConfigError({os.str()});
}

std::size_t ScenarioConfig::step_count() const
{
    if (!(dt > 0.0) || !(t_end >= 0.0)) {
        return 0;
    }
    return static_cast<std::size_t>(std::llround(t_end / dt));
}

std::vector<std::string> validate_config(const ScenarioConfig& cfg)
{
    std::vector<std::string> out;
    auto fail = [&out](auto&&... parts) {
        std::ostringstream os;
        (os << ... << parts);
        out.push_back(os.str());
    };

    const auto& g = cfg.grid;
    const bool grid_ok = std::isfinite(g.x_max) && g.x_max > 0.0 && g.n_cells >= 16;
    if (!(std::isfinite(g.x_max) && g.x_max > 0.0)) {
        fail("x_max must be positive (got ", g.x_max, ")");
    }
    if (g.n_cells < 16) {
        fail("n_cells must be at least 16 (got ", g.n_cells, ")");
    }

    if (!(std::isfinite(cfg.dt) && cfg.dt > 0.0)) {
        fail("dt must be positive (got ", cfg.dt, ")");
    }
    if (!(std::isfinite(cfg.t_end) && cfg.t_end >= 0.0)) {
        fail("t_end must be non-negative (got ", cfg.t_end, ")");
    }
    if (std::isfinite(cfg.dt) && cfg.dt > 0.0 && std::isfinite(cfg.t_end) && cfg.t_end >= 0.0) {
        const double ratio = cfg.t_end / cfg.dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-6 * std::max(1.0, ratio)) {
            fail("t_end=", cfg.t_end, " is not a whole number of steps of dt=", cfg.dt);
        }
        if (ratio > static_cast<double>(kMaxSteps)) {
            fail("t_end/dt exceeds ", kMaxSteps, " steps");
        }
    }
    if (cfg.sample_stride < 1) {
        fail("sample_stride must be at least 1");
    }

    const auto& b = cfg.barrier;
    if (!(std::isfinite(b.height) && b.height >= 0.0)) {
        fail("barrier_height must be >= 0 (got ", b.height, ")");
    }
    if (!(std::isfinite(b.width) && b.width > 0.0)) {
        fail("barrier_width must be > 0 (got ", b.width, ")");
    }

    const auto& a = cfg.absorber;
    if (!(std::isfinite(a.strength) && a.strength >= 0.0)) {
        fail("absorber_strength must be >= 0 (got ", a.strength, ")");
    }
    if (a.power < 2 || a.power > 4) {
        fail("absorber_power must be 2, 3 or 4 (got ", a.power, ")");
    }

    // Ordering 1 + w <= a <= absorber_start < x_max, with 1 + w < absorber_start.
    if (b.outer_edge() > cfg.probe_a) {
        fail("probe_a < 1+w (a=", cfg.probe_a, ", 1+w=", b.outer_edge(), ")");
    }
    if (!(b.outer_edge() < a.start)) {
        fail("barrier outer edge 1+w=", b.outer_edge(), " must lie below absorber_start=", a.start);
    }
    if (cfg.probe_a > a.start) {
        fail("probe_a=", cfg.probe_a, " must not exceed absorber_start=", a.start);
    }
    if (!(a.start < g.x_max)) {
        fail("absorber_start=", a.start, " must lie below x_max=", g.x_max);
    }

    if (grid_ok) {
        auto aligned = [&](double x, const char* what) {
            if (!g.point_at(x)) {
                fail(what, " x=", x, " is not a grid point (dx=", g.dx(), ")");
            }
        };
        aligned(BarrierSpec::inner_edge, "barrier inner edge");
        if (std::isfinite(b.width) && b.width > 0.0) {
            aligned(b.outer_edge(), "barrier outer edge");
        }
        aligned(cfg.probe_a, "probe_a");
        aligned(a.start, "absorber_start");
    }
    return out;
}

void require_valid(const ScenarioConfig& cfg)
{
    auto violations = validate_config(cfg);
    if (!violations.empty()) {
        throw ConfigError(std::move(violations));
    }
}

std::vector<complex> sample_potential(const GridSpec& grid, const BarrierSpec& barrier,
                                      const std::optional<AbsorberSpec>& absorber)
{
    const std::size_t n = grid.interior_points();
    std::vector<complex> v(n, complex{0.0, 0.0});

    if (barrier.height != 0.0) {
        const std::size_t lo = grid.require_point(BarrierSpec::inner_edge, "barrier inner edge");
        const std::size_t hi = grid.require_point(barrier.outer_edge(), "barrier outer edge");
        for (std::size_t i = std::max<std::size_t>(lo, 1); i <= hi && i < grid.n_cells; ++i) {
            v[i - 1].real(i == lo || i == hi ? 0.5 * barrier.height : barrier.height);
        }
    }

    if (absorber && absorber->strength != 0.0) {
        const std::size_t first = grid.require_point(absorber->start, "absorber_start");
        const double width = grid.x_max - absorber->start;
        for (std::size_t i = std::max<std::size_t>(first, 1); i < grid.n_cells; ++i) {
            const double ramp = (grid.x(i) - absorber->start) / width;
            v[i - 1].imag(-absorber->strength * std::pow(ramp, absorber->power));
        }
    }
    return v;
}

WaveFunction initial_wavefunction(const GridSpec& grid)
{
    const std::size_t edge = grid.require_point(1.0, "initial state support edge");
    WaveFunction psi{grid, 0.0, std::vector<complex>(grid.interior_points())};
    for (std::size_t i = 1; i <= edge && i < grid.n_cells; ++i) {
        psi.values[i - 1] = std::numbers::sqrt2 * std::sin(std::numbers::pi * grid.x(i));
    }
    // Zero at the edge point itself, not sin(pi) ~ 1e-16.
    if (edge >= 1 && edge < grid.n_cells) {
        psi.values[edge - 1] = 0.0;
    }

    const double scale = 1.0 / std::sqrt(norm_squared(psi));
    for (auto& v : psi.values) {
        v *= scale;
    }
    return psi;
}

double norm_squared(const WaveFunction& psi)
{
    double sum = 0.0;
    for (const auto& v : psi.values) {
        sum += std::norm(v);
    }
    return sum * psi.grid.dx();
}

}  // namespace qdecay
