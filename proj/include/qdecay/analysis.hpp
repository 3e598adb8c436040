#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qdecay/observables.hpp"

namespace qdecay {

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TimeWindow {
    double lo = 0.0;
    double hi = 0.0;
};

enum class DecayLaw { Exponential, Gaussian };

/// Least-squares fit of ln P. For Exponential, `parameter` is the rate gamma
/// in P ~ exp(-gamma t); for Gaussian it is tau in P ~ exp(-t^2/tau).
struct FitResult {
    DecayLaw law = DecayLaw::Exponential;
    double parameter = 0.0;
    TimeWindow window;
    double residual = 0.0;  // rms of the fit in ln P
    std::size_t samples = 0;
    bool poor = false;      // residual above the quality threshold

    double gamma() const { return parameter; }
    double tau() const { return parameter; }
};

/// Residuals above this (rms in ln P) mark a fit as poor.
inline constexpr double kPoorFitResidual = 1e-3;

inline constexpr TimeWindow kGaussianWindow{0.0, 0.25};
inline constexpr TimeWindow kExponentialWindow{2.5, 3.5};

/// Line through (t, ln P) on the window; gamma = -slope. Needs >= 10 samples
/// above the probability floor, else AnalysisError.
FitResult fit_exponential(const DecayTrace& trace, TimeWindow window = kExponentialWindow);

/// Line through (t^2, ln P) on the window; tau = -1/slope (infinite for a flat P).
FitResult fit_gaussian(const DecayTrace& trace, TimeWindow window = kGaussianWindow);

struct Peak {
    double t = 0.0;
    double g = 0.0;  // signed value of g at the peak
};

/// Maximum of |g| over [t_min, t_end], refined by a parabola through the
/// neighbouring samples. Ties go to the earlier sample.
Peak transition_peak(const DecayTrace& trace, double t_min = 0.1);

/// Maximal intervals with g > 0; ends interpolated to the zero crossings of g.
/// With min_length > 0, intervals closer than min_length are merged; intervals
/// shorter than min_length or whose largest g is below min_peak are dropped.
std::vector<TimeWindow> positive_g_intervals(const DecayTrace& trace, double min_length = 0.0,
                                             double min_peak = 0.0);

/// Reporting thresholds separating positive-g episodes from sample jitter and
/// round-off in g while P is still 1 to machine precision.
inline constexpr double kPositiveGMinLength = 0.01;
inline constexpr double kPositiveGMinPeak = 1e-6;

struct Crossing {
    double t = 0.0;
    double P = 0.0;  // P of the first trace at the crossing
};

/// First time after t_min at which P_a - P_b strictly changes sign, linearly
/// interpolated. nullopt when there is none. Traces must share sample times.
std::optional<Crossing> crossing_time(const DecayTrace& a, const DecayTrace& b, double t_min = 0.1);

struct PhaseOptions {
    TimeWindow gaussian_window = kGaussianWindow;
    TimeWindow exponential_window = kExponentialWindow;
    double gaussian_tolerance = 0.20;     // relative deviation of g from -2t/tau
    double exponential_tolerance = 0.10;  // relative band around the tail median of g
};

/// Both thresholds are engineering constants, not derived quantities.
struct PhaseSegmentation {
    std::optional<double> gaussian_end;
    std::optional<double> exponential_start;
};

PhaseSegmentation segment_phases(const DecayTrace& trace, const PhaseOptions& options = {});

/// Largest |g| over samples with t in [lo, hi].
double max_abs_g(const DecayTrace& trace, TimeWindow window);

}  // namespace qdecay
