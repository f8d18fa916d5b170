#pragma once

#include <vector>

#include "qtk/simcore/state.hpp"

namespace qtk {

inline constexpr int kDensityMaxQubits = 6;

/// Small dense density matrix, used only by test oracles.
class DensityMatrix {
public:
    explicit DensityMatrix(int n_qubits);

    static DensityMatrix pure(const StateVector& psi);
    /// Σ p_i |ψ_i⟩⟨ψ_i|
    static DensityMatrix mixture(const std::vector<std::pair<double, StateVector>>& ensemble);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return dim_; }
    cplx at(std::size_t r, std::size_t c) const { return m_[r * dim_ + c]; }

    double trace() const;
    double purity() const;
    /// tr(ρσ)
    double overlap(const DensityMatrix& other) const;
    std::vector<double> diagonal() const;

private:
    int n_;
    std::size_t dim_;
    std::vector<cplx> m_;
};

}  // namespace qtk
