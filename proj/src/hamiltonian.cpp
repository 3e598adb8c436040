#include "qdecay/hamiltonian.hpp"

#include <stdexcept>

namespace qdecay {

TridiagonalOperator build_hamiltonian(const GridSpec& grid, std::span<const complex> potential)
{
    const std::size_t n = grid.interior_points();
    if (potential.size() != n) {
        throw std::invalid_argument("potential size does not match grid interior");
    }
    const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());

    TridiagonalOperator h{grid, std::vector<complex>(n), std::vector<complex>(n - 1, -inv_dx2)};
    for (std::size_t i = 0; i < n; ++i) {
        h.diag[i] = 2.0 * inv_dx2 + potential[i];
    }
    return h;
}

TridiagonalOperator build_hamiltonian(const GridSpec& grid, const BarrierSpec& barrier,
                                      const std::optional<AbsorberSpec>& absorber)
{
    const auto v = sample_potential(grid, barrier, absorber);
    return build_hamiltonian(grid, v);
}

TridiagonalOperator build_hamiltonian(const ScenarioConfig& cfg)
{
    return build_hamiltonian(cfg.grid, cfg.barrier, cfg.absorber);
}

std::vector<complex> apply(const TridiagonalOperator& h, std::span<const complex> psi)
{
    const std::size_t n = h.size();
    if (psi.size() != n) {
        throw std::invalid_argument("apply: wave function length does not match operator");
    }
    std::vector<complex> out(n);
    if (n == 0) {
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = h.diag[i] * psi[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out[i] += h.off[i] * psi[i + 1];
        out[i + 1] += h.off[i] * psi[i];
    }
    return out;
}

complex inner_product(const GridSpec& grid, std::span<const complex> a, std::span<const complex> b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner_product: length mismatch");
    }
    complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum * grid.dx();
}

complex energy_expectation(const TridiagonalOperator& h, const WaveFunction& psi)
{
    const auto& v = psi.values;
    const std::size_t n = h.size();
    if (v.size() != n) {
        throw std::invalid_argument("energy_expectation: wave function length does not match operator");
    }
    // Fused conj(psi) . (H psi), no temporary.
    complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        complex hv = h.diag[i] * v[i];
        if (i > 0) {
            hv += h.off[i - 1] * v[i - 1];
        }
        if (i + 1 < n) {
            hv += h.off[i] * v[i + 1];
        }
        sum += std::conj(v[i]) * hv;
    }
    return sum * psi.grid.dx();
}

}  // namespace qdecay
