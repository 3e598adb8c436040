#include "qdecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdecay {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    std::size_t n = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.n = n;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

constexpr std::size_t kMinFitSamples = 10;

LineFit fit_log_probability(const DecayTrace& trace, TimeWindow window, bool squared_time)
{
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double t = trace.t[k];
        if (t < window.lo || t > window.hi) {
            continue;
        }
        if (!(trace.P[k] >= kProbabilityFloor)) {
            std::ostringstream os;
            os << "P underflows the floor at t=" << t << " inside the fit window";
            throw AnalysisError(os.str());
        }
        x.push_back(squared_time ? t * t : t);
        y.push_back(std::log(trace.P[k]));
    }
    if (x.size() < kMinFitSamples) {
        std::ostringstream os;
        os << "fit window [" << window.lo << ", " << window.hi << "] holds " << x.size()
           << " samples, need " << kMinFitSamples;
        throw AnalysisError(os.str());
    }
    return least_squares(x, y);
}

}  // namespace

FitResult fit_exponential(const DecayTrace& trace, TimeWindow window)
{
    const auto line = fit_log_probability(trace, window, false);
    FitResult r;
    r.law = DecayLaw::Exponential;
    r.parameter = -line.slope;
    r.window = window;
    r.residual = line.rms;
    r.samples = line.n;
    r.poor = line.rms > kPoorFitResidual;
    return r;
}

FitResult fit_gaussian(const DecayTrace& trace, TimeWindow window)
{
    const auto line = fit_log_probability(trace, window, true);
    FitResult r;
    r.law = DecayLaw::Gaussian;
    r.parameter = line.slope < 0.0 ? -1.0 / line.slope : std::numeric_limits<double>::infinity();
    r.window = window;
    r.residual = line.rms;
    r.samples = line.n;
    r.poor = line.rms > kPoorFitResidual;
    return r;
}

Peak transition_peak(const DecayTrace& trace, double t_min)
{
    std::size_t best = trace.size();
    double best_abs = -1.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace.t[k] < t_min || !trace.g[k]) {
            continue;
        }
        const double v = std::abs(*trace.g[k]);
        if (v > best_abs) {
            best_abs = v;
            best = k;
        }
    }
    if (best == trace.size()) {
        throw AnalysisError("no g samples after t_min");
    }

    Peak peak{trace.t[best], *trace.g[best]};
    // Parabola through |g| at the neighbours, when both exist and are in range.
    if (best > 0 && best + 1 < trace.size() && trace.g[best - 1] && trace.g[best + 1] &&
        trace.t[best - 1] >= t_min) {
        const double y0 = std::abs(*trace.g[best - 1]);
        const double y1 = best_abs;
        const double y2 = std::abs(*trace.g[best + 1]);
        const double h = 0.5 * (trace.t[best + 1] - trace.t[best - 1]);
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0) {
            const double shift = 0.5 * (y0 - y2) / denom;  // in units of h, |shift| <= 1/2
            peak.t = trace.t[best] + shift * h;
            const double mag = y1 - 0.25 * (y0 - y2) * shift;
            peak.g = std::copysign(mag, *trace.g[best]);
        }
    }
    return peak;
}

std::vector<TimeWindow> positive_g_intervals(const DecayTrace& trace, double min_length, double min_peak)
{
    struct Raw {
        TimeWindow w;
        double peak;
    };
    std::vector<Raw> raw;
    const std::size_t n = trace.size();

    // Zero crossing of g between samples k and k+1 (both present).
    auto crossing = [&](std::size_t k) {
        const double g0 = *trace.g[k];
        const double g1 = *trace.g[k + 1];
        const double f = g0 / (g0 - g1);
        return trace.t[k] + f * (trace.t[k + 1] - trace.t[k]);
    };
    auto positive = [&](std::size_t k) { return trace.g[k] && *trace.g[k] > 0.0; };

    std::size_t k = 0;
    while (k < n) {
        if (!positive(k)) {
            ++k;
            continue;
        }
        const std::size_t first = k;
        double peak = *trace.g[k];
        while (k + 1 < n && positive(k + 1)) {
            ++k;
            peak = std::max(peak, *trace.g[k]);
        }
        const std::size_t last = k;
        TimeWindow w{trace.t[first], trace.t[last]};
        if (first > 0 && trace.g[first - 1]) {
            w.lo = crossing(first - 1);
        }
        if (last + 1 < n && trace.g[last + 1]) {
            w.hi = crossing(last);
        }
        raw.push_back({w, peak});
        ++k;
    }

    std::vector<Raw> merged;
    for (const auto& r : raw) {
        if (min_length > 0.0 && !merged.empty() && r.w.lo - merged.back().w.hi < min_length) {
            merged.back().w.hi = r.w.hi;
            merged.back().peak = std::max(merged.back().peak, r.peak);
        } else {
            merged.push_back(r);
        }
    }
    std::vector<TimeWindow> out;
    for (const auto& r : merged) {
        if (r.w.hi - r.w.lo >= min_length && r.peak >= min_peak) {
            out.push_back(r.w);
        }
    }
    return out;
}

std::optional<Crossing> crossing_time(const DecayTrace& a, const DecayTrace& b, double t_min)
{
    if (a.t != b.t) {
        throw AnalysisError("crossing_time: traces do not share sample times");
    }
    int last_sign = 0;
    std::size_t last_index = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.P[k] - b.P[k];
        const int sign = (d > 0.0) - (d < 0.0);
        if (sign == 0) {
            continue;
        }
        if (a.t[k] > t_min && last_sign != 0 && sign != last_sign) {
            const std::size_t j = last_index;
            const double d0 = a.P[j] - b.P[j];
            const double f = d0 / (d0 - d);
            Crossing c;
            c.t = a.t[j] + f * (a.t[k] - a.t[j]);
            c.P = a.P[j] + f * (a.P[k] - a.P[j]);
            return c;
        }
        last_sign = sign;
        last_index = k;
    }
    return std::nullopt;
}

double max_abs_g(const DecayTrace& trace, TimeWindow window)
{
    double m = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace.t[k] >= window.lo && trace.t[k] <= window.hi && trace.g[k]) {
            m = std::max(m, std::abs(*trace.g[k]));
        }
    }
    return m;
}

PhaseSegmentation segment_phases(const DecayTrace& trace, const PhaseOptions& options)
{
    PhaseSegmentation out;
    const std::size_t n = trace.size();

    // Gaussian stage: a good short-time fit, continued while g tracks -2t/tau.
    std::optional<FitResult> gauss;
    try {
        gauss = fit_gaussian(trace, options.gaussian_window);
    } catch (const AnalysisError&) {
    }
    if (!gauss || gauss->poor) {
        out.gaussian_end = options.gaussian_window.lo;
    } else {
        const double tau = gauss->tau();
        std::optional<double> end;
        for (std::size_t k = 0; k < n; ++k) {
            if (trace.t[k] < options.gaussian_window.hi) {
                continue;
            }
            const double expected = std::isfinite(tau) ? -2.0 * trace.t[k] / tau : 0.0;
            if (!trace.g[k] ||
                std::abs(*trace.g[k] - expected) > options.gaussian_tolerance * std::abs(*trace.g[k])) {
                end = trace.t[k];
                break;
            }
        }
        out.gaussian_end = end ? *end : (n ? trace.t.back() : options.gaussian_window.hi);
    }

    // Exponential stage: from where g settles into a band around its tail median.
    std::vector<double> tail;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = trace.t[k];
        if (t >= options.exponential_window.lo && t <= options.exponential_window.hi && trace.g[k]) {
            tail.push_back(*trace.g[k]);
        }
    }
    if (tail.empty()) {
        return out;
    }
    std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
    const double median = tail[tail.size() / 2];
    const double band = options.exponential_tolerance * std::abs(median);

    std::optional<std::size_t> start;
    for (std::size_t k = n; k-- > 0;) {
        if (trace.t[k] > options.exponential_window.hi) {
            continue;
        }
        if (!trace.g[k] || std::abs(*trace.g[k] - median) > band) {
            break;
        }
        start = k;
    }
    if (start && trace.t[*start] <= options.exponential_window.lo) {
        out.exponential_start = trace.t[*start];
    }
    return out;
}

}  // namespace qdecay
