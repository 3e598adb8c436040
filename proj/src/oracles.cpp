#include "qdecay/oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qdecay::oracles {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 64>;

using std::numbers::pi;

// Sum of f over `panels` equal Gauss-Legendre panels on [lo, hi].
template <class F>
auto panel_integrate(F&& f, double lo, double hi, std::size_t panels)
{
    const double width = (hi - lo) / static_cast<double>(panels);
    decltype(f(lo)) sum{};
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + static_cast<double>(p) * width;
        sum += Gauss::integrate(f, a, a + width);
    }
    return sum;
}

constexpr double kMaxPhasePerPanel = 40.0;

std::size_t panels_for(double length, double max_width)
{
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / max_width)));
}

}  // namespace

complex unit_box_ground_state(double x)
{
    if (x < 0.0 || x > 1.0) {
        return {0.0, 0.0};
    }
    return std::numbers::sqrt2 * std::sin(pi * x);
}

FreeHalfLine::FreeHalfLine(Profile psi0, double support) : psi0_(std::move(psi0)), support_(support) {}

complex FreeHalfLine::amplitude(double x, double t) const
{
    if (!(t > 0.0)) {
        throw OracleError("free half-line oracle needs t > 0");
    }
    const complex prefactor = std::polar(1.0 / std::sqrt(4.0 * pi * t), -pi / 4.0);
    const double quarter_inv_t = 0.25 / t;
    auto integrand = [&](double xp) {
        const double dm = x - xp;
        const double dp = x + xp;
        const complex k = std::polar(1.0, dm * dm * quarter_inv_t) - std::polar(1.0, dp * dp * quarter_inv_t);
        return k * psi0_(xp);
    };
    // Phase of the kernel changes at rate |x +- x'|/(2t) across the support.
    const double rate = (std::abs(x) + support_) / (2.0 * t);
    const double width = std::min({1.0, std::sqrt(t), kMaxPhasePerPanel / rate});
    return prefactor * panel_integrate(integrand, 0.0, support_, panels_for(support_, width));
}

double FreeHalfLine::probability_in(double a, double t) const
{
    // |psi|^2 beats between the direct and image contributions at rate up to
    // (x + L) L / t; keep that phase bounded per panel as well.
    auto density = [&](double x) { return std::norm(amplitude(x, t)); };
    double sum = 0.0;
    double x = 0.0;
    const double base = std::min({0.25, std::sqrt(t)});
    while (x < a) {
        const double rate = (x + support_) * support_ / t + 1.0;
        const double hi = std::min(a, x + std::min(base, kMaxPhasePerPanel / rate));
        sum += Gauss::integrate(density, x, hi);
        x = hi;
    }
    return sum;
}

ClosedBoxSpectral::ClosedBoxSpectral(Profile psi0, double length, std::size_t max_modes) : length_(length)
{
    constexpr double kCoeffFloor = 1e-12;
    constexpr std::size_t kQuietRun = 16;
    std::size_t quiet = 0;
    for (std::size_t n = 1; n <= max_modes; ++n) {
        const double kn = static_cast<double>(n) * pi / length_;
        auto f = [&](double x) { return psi0(x) * std::sin(kn * x); };
        // Two periods of the mode per panel at most.
        const std::size_t panels = std::max<std::size_t>(4, (n + 3) / 4);
        const complex c = (2.0 / length_) * panel_integrate(f, 0.0, length_, panels);
        coeffs_.push_back(c);
        quiet = std::abs(c) < kCoeffFloor ? quiet + 1 : 0;
        if (quiet >= kQuietRun) {
            break;
        }
    }
    while (!coeffs_.empty() && std::abs(coeffs_.back()) < kCoeffFloor) {
        coeffs_.pop_back();
    }
}

complex ClosedBoxSpectral::amplitude(double x, double t) const
{
    complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const double kn = static_cast<double>(i + 1) * pi / length_;
        sum += coeffs_[i] * std::polar(1.0, -kn * kn * t) * std::sin(kn * x);
    }
    return sum;
}

WaveFunction spectral_evolve_closed_box(const Profile& psi0, const GridSpec& grid, double t)
{
    const ClosedBoxSpectral box(psi0, grid.x_max);
    WaveFunction out{grid, t, std::vector<complex>(grid.interior_points())};
    for (std::size_t i = 1; i < grid.n_cells; ++i) {
        out.values[i - 1] = box.amplitude(grid.x(i), t);
    }
    return out;
}

namespace {

// kappa-dependent pieces; T/kappa and kappa*T are even in kappa.
struct BarrierFactors {
    complex tanh_over_kappa;  // tanh(kappa w)/kappa
    complex kappa_tanh;       // kappa tanh(kappa w)
    complex sech2;            // 1 - tanh^2
};

BarrierFactors barrier_factors(complex k, double h, double w)
{
    const complex kappa = std::sqrt(complex(h) - k * k);
    if (std::abs(kappa) * w < 1e-8) {
        return {complex(w), complex(0.0), complex(1.0)};
    }
    const complex th = std::tanh(kappa * w);
    return {th / kappa, kappa * th, 1.0 - th * th};
}

}  // namespace

complex matching_function(complex k, double h, double w)
{
    const auto f = barrier_factors(k, h, w);
    const complex s = std::sin(k);
    const complex c = std::cos(k);
    const complex psi = s + k * c * f.tanh_over_kappa;
    const complex dpsi = s * f.kappa_tanh + k * c;
    return dpsi - complex(0.0, 1.0) * k * psi;
}

complex matching_derivative(complex k, double h, double w)
{
    const auto f = barrier_factors(k, h, w);
    const complex s = std::sin(k);
    const complex c = std::cos(k);
    const complex kappa2 = complex(h) - k * k;

    // d(kappa^2)/dk = -2k. With T = tanh(kappa w):
    //   d(T/kappa)/dk = -k (w sech^2 - T/kappa) / kappa^2
    //   d(kappa T)/dk = -k (T/kappa + w sech^2)
    complex d_tok;
    if (std::abs(kappa2) * w * w < 1e-12) {
        d_tok = k * (2.0 / 3.0) * w * w * w;  // series of tanh(x w)/x around x = 0
    } else {
        d_tok = -k * (w * f.sech2 - f.tanh_over_kappa) / kappa2;
    }
    const complex d_kt = -k * (f.tanh_over_kappa + w * f.sech2);

    const complex psi = s + k * c * f.tanh_over_kappa;
    const complex dpsi_dk = c + (c - k * s) * f.tanh_over_kappa + k * c * d_tok;
    const complex dphi_dk = c * f.kappa_tanh + s * d_kt + c - k * s;  // derivative of psi'
    const complex i{0.0, 1.0};
    return dphi_dk - i * psi - i * k * dpsi_dk;
}

ResonancePole resonance_gamma(double h, double w)
{
    if (!(h > pi * pi)) {
        std::ostringstream os;
        os << "resonance oracle needs h > pi^2 (got h=" << h << ")";
        throw OracleError(os.str());
    }
    if (!(w > 0.0)) {
        throw OracleError("resonance oracle needs w > 0");
    }

    // Seed: k cos k + kappa sin k = 0 on (pi/2, min(pi, sqrt h)), by bisection.
    auto seed_fn = [h](double k) { return k * std::cos(k) + std::sqrt(h - k * k) * std::sin(k); };
    double lo = pi / 2.0;
    double hi = std::min(pi, std::sqrt(h));
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (seed_fn(mid) > 0.0 ? lo : hi) = mid;
    }

    ResonancePole pole;
    complex k{0.5 * (lo + hi), 0.0};
    // Start slightly below the real axis so the iterate moves onto the
    // decaying sheet rather than stalling on the symmetric root.
    k -= complex(0.0, 1e-3);
    for (int it = 1; it <= 100; ++it) {
        const complex step = matching_function(k, h, w) / matching_derivative(k, h, w);
        k -= step;
        pole.iterations = it;
        if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || std::abs(k.real() - pi) > 1.0) {
            std::ostringstream os;
            os << "resonance Newton left the lowest branch (k=" << k << ") for h=" << h << ", w=" << w;
            throw OracleError(os.str());
        }
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(k))) {
            pole.k = k;
            pole.energy = k * k;
            pole.gamma = -2.0 * pole.energy.imag();
            pole.residual = std::abs(matching_function(k, h, w));
            if (k.imag() > 1e-12 * std::abs(k)) {
                std::ostringstream os;
                os << "resonance Newton converged to a growing pole (k=" << k << ")";
                throw OracleError(os.str());
            }
            return pole;
        }
    }
    std::ostringstream os;
    os << "resonance Newton did not converge in 100 iterations for h=" << h << ", w=" << w;
    throw OracleError(os.str());
}

}  // namespace qdecay::oracles
