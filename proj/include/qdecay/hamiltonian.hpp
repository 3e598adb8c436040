#pragma once

#include <span>
#include <vector>

#include "qdecay/scenario.hpp"

namespace qdecay {

/// H = -d^2/dx^2 + V(x) on the interior points, 3-point stencil, Dirichlet
/// walls. Sub- and super-diagonal are the same array.
struct TridiagonalOperator {
    GridSpec grid;
    std::vector<complex> diag;
    std::vector<complex> off;  // size diag.size() - 1

    std::size_t size() const { return diag.size(); }
};

TridiagonalOperator build_hamiltonian(const GridSpec& grid, std::span<const complex> potential);

TridiagonalOperator build_hamiltonian(const GridSpec& grid, const BarrierSpec& barrier,
                                      const std::optional<AbsorberSpec>& absorber);

TridiagonalOperator build_hamiltonian(const ScenarioConfig& cfg);

/// (H psi)_i with psi_0 = psi_N = 0. Throws std::invalid_argument on size mismatch.
std::vector<complex> apply(const TridiagonalOperator& h, std::span<const complex> psi);

/// dx * sum conj(a_i) b_i.
complex inner_product(const GridSpec& grid, std::span<const complex> a, std::span<const complex> b);

/// <psi|H|psi> by the same quadrature. Not divided by the norm.
complex energy_expectation(const TridiagonalOperator& h, const WaveFunction& psi);

}  // namespace qdecay
