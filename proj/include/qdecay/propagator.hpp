#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdecay/hamiltonian.hpp"
#include "qdecay/scenario.hpp"

namespace qdecay {

struct DecayTrace;

/// A time step produced a non-finite amplitude, or the elimination hit a
/// vanishing pivot.
class NumericalAbort : public std::runtime_error {
public:
    NumericalAbort(const std::string& what, std::size_t step);

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Crank-Nicolson (Cayley) stepper: solves (1 + iH dt/2) psi' = (1 - iH dt/2) psi
/// with a pre-factored Thomas elimination. One instance is single-threaded.
class CrankNicolsonStepper {
public:
    CrankNicolsonStepper(TridiagonalOperator hamiltonian, double dt, WaveFunction psi);

    /// Advance by one dt. Throws NumericalAbort on non-finite output.
    void step();

    /// Advance n steps.
    void advance(std::size_t n);

    /// Re-factor for a new time step (negative dt steps backwards).
    void set_dt(double dt);

    const WaveFunction& state() const noexcept { return psi_; }
    double time() const noexcept { return psi_.t; }
    double dt() const noexcept { return dt_; }
    std::size_t steps_taken() const noexcept { return steps_; }
    const TridiagonalOperator& hamiltonian() const noexcept { return h_; }

    /// Smallest pivot magnitude seen during factorization.
    double min_pivot() const noexcept { return min_pivot_; }

private:
    void factor();

    TridiagonalOperator h_;
    double dt_;
    WaveFunction psi_;
    std::size_t steps_ = 0;
    double t0_ = 0.0;
    std::size_t steps_since_t0_ = 0;

    // (1 + iH dt/2) off-diagonal, the eliminated super-diagonal c'_i, the
    // reciprocal pivots 1/m_i and the forward multipliers l_{i-1}/m_i. The
    // matrix is constant, so this is done once per dt.
    std::vector<complex> lhs_off_;
    std::vector<complex> upper_;
    std::vector<complex> lower_;
    std::vector<complex> inv_pivot_;
    std::vector<complex> scratch_;
    double min_pivot_ = 0.0;
};

/// Called with the current state and its step index at every sample.
using Observer = std::function<void(const WaveFunction&, std::size_t step)>;

/// Propagate `cfg` from the initial state to t_end, sampling observables at
/// t=0, every sample_stride steps, and at t_end. Deterministic.
DecayTrace run(const ScenarioConfig& cfg, std::span<const Observer> observers = {});

}  // namespace qdecay
