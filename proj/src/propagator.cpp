#include "qdecay/propagator.hpp"

#include <cmath>
#include <limits>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

#include "qdecay/observables.hpp"

namespace qdecay {

namespace {

constexpr double kPivotFloor = 1e-12;

// Flush subnormals to zero for the lifetime of the guard. The implicit solve
// spreads exponentially small amplitudes across the whole box, and subnormal
// arithmetic there costs an order of magnitude in run time.
class FlushDenormals {
public:
    FlushDenormals()
    {
#if defined(__SSE__)
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | 0x8040);  // FTZ | DAZ
#endif
    }
    ~FlushDenormals()
    {
#if defined(__SSE__)
        _mm_setcsr(saved_);
#endif
    }
    FlushDenormals(const FlushDenormals&) = delete;
    FlushDenormals& operator=(const FlushDenormals&) = delete;

private:
    unsigned int saved_ = 0;
};

}  // namespace

NumericalAbort::NumericalAbort(const std::string& what, std::size_t step)
    : std::runtime_error(what + " at step " + std::to_string(step)), step_(step)
{
}

CrankNicolsonStepper::CrankNicolsonStepper(TridiagonalOperator hamiltonian, double dt, WaveFunction psi)
    : h_(std::move(hamiltonian)), dt_(dt), psi_(std::move(psi))
{
    if (psi_.values.size() != h_.size()) {
        throw std::invalid_argument("stepper: wave function length does not match operator");
    }
    if (h_.size() < 2) {
        throw std::invalid_argument("stepper: need at least two interior points");
    }
    t0_ = psi_.t;
    factor();
}

void CrankNicolsonStepper::set_dt(double dt)
{
    // Keep time stamps exact multiples of the current dt from the last rebase.
    t0_ = psi_.t;
    steps_since_t0_ = 0;
    dt_ = dt;
    factor();
}

void CrankNicolsonStepper::factor()
{
    const std::size_t n = h_.size();
    const complex half_i_dt{0.0, 0.5 * dt_};

    lhs_off_.resize(n - 1);
    upper_.resize(n - 1);
    lower_.resize(n - 1);
    inv_pivot_.resize(n);
    scratch_.resize(n);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        lhs_off_[i] = half_i_dt * h_.off[i];
    }

    // Forward elimination of the constant matrix; only the right-hand side
    // changes between steps.
    min_pivot_ = std::numeric_limits<double>::infinity();
    complex pivot = 1.0 + half_i_dt * h_.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            pivot = 1.0 + half_i_dt * h_.diag[i] - lhs_off_[i - 1] * upper_[i - 1];
        }
        const double mag = std::abs(pivot);
        min_pivot_ = std::min(min_pivot_, mag);
        if (!(mag > kPivotFloor)) {
            throw NumericalAbort("vanishing pivot in tridiagonal elimination (row " + std::to_string(i) + ")",
                                 steps_);
        }
        inv_pivot_[i] = 1.0 / pivot;
        if (i + 1 < n) {
            upper_[i] = lhs_off_[i] * inv_pivot_[i];
        }
        if (i > 0) {
            lower_[i - 1] = lhs_off_[i - 1] * inv_pivot_[i];
        }
    }
}

void CrankNicolsonStepper::step()
{
    // (1 - iH dt/2) = 2 - (1 + iH dt/2), so psi' = 2 chi - psi with
    // (1 + iH dt/2) chi = psi: one Thomas solve, no explicit right-hand side.
    const std::size_t n = h_.size();
    auto& psi = psi_.values;
    auto& d = scratch_;

    d[0] = psi[0] * inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) {
        d[i] = psi[i] * inv_pivot_[i] - lower_[i - 1] * d[i - 1];
    }

    double check = 0.0;
    complex chi = d[n - 1];
    psi[n - 1] = 2.0 * chi - psi[n - 1];
    check += psi[n - 1].real() + psi[n - 1].imag();
    for (std::size_t i = n - 1; i-- > 0;) {
        chi = d[i] - upper_[i] * chi;
        psi[i] = 2.0 * chi - psi[i];
        check += psi[i].real() + psi[i].imag();
    }

    ++steps_;
    ++steps_since_t0_;
    psi_.t = t0_ + static_cast<double>(steps_since_t0_) * dt_;

    if (!std::isfinite(check)) {
        throw NumericalAbort("non-finite wave function", steps_);
    }
}

void CrankNicolsonStepper::advance(std::size_t n)
{
    FlushDenormals guard;
    for (std::size_t k = 0; k < n; ++k) {
        step();
    }
}

DecayTrace run(const ScenarioConfig& cfg, std::span<const Observer> observers)
{
    require_valid(cfg);
    FlushDenormals guard;

    CrankNicolsonStepper stepper(build_hamiltonian(cfg), cfg.dt, initial_wavefunction(cfg.grid));
    TraceRecorder recorder(cfg, stepper.hamiltonian());
    const double a = cfg.probe_a;

    // The current reported at a sample is the mean of the time-centered fluxes
    // of the half steps on either side of it. The instantaneous flux carries a
    // step-to-step sawtooth from high-k modes whose Cayley phase is near pi.
    ProbeStencil previous = probe_stencil(stepper.state(), a);
    double half_step_before = stencil_current(previous);
    bool awaiting_current = false;

    auto sample = [&] {
        recorder.record(stepper.state(), half_step_before);
        awaiting_current = true;
        for (const auto& obs : observers) {
            obs(stepper.state(), stepper.steps_taken());
        }
    };

    const std::size_t total = cfg.step_count();
    sample();
    for (std::size_t k = 1; k <= total || awaiting_current; ++k) {
        stepper.step();
        const ProbeStencil current = probe_stencil(stepper.state(), a);
        const double half_step = stencil_current(midpoint(previous, current));
        if (awaiting_current) {
            recorder.set_last_current(0.5 * (half_step_before + half_step));
            awaiting_current = false;
        }
        half_step_before = half_step;
        previous = current;
        if (k <= total && (k % cfg.sample_stride == 0 || k == total)) {
            sample();
        }
    }
    return recorder.finish();
}

}  // namespace qdecay
