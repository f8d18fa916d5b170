#include "qtk/simcore/density.hpp"

namespace qtk {

DensityMatrix::DensityMatrix(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > kDensityMaxQubits) throw ResourceError("density oracle limited to 6 qubits");
    dim_ = std::size_t{1} << n_qubits;
    m_.assign(dim_ * dim_, cplx(0, 0));
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) { return mixture({{1.0, psi}}); }

DensityMatrix DensityMatrix::mixture(const std::vector<std::pair<double, StateVector>>& ensemble) {
    if (ensemble.empty()) throw SimError("empty ensemble");
    DensityMatrix rho(ensemble.front().second.n_qubits());
    for (const auto& [p, psi] : ensemble) {
        if (psi.n_qubits() != rho.n_) throw SimError("ensemble qubit counts differ");
        const auto& a = psi.amplitudes();
        for (std::size_t r = 0; r < rho.dim_; ++r)
            for (std::size_t c = 0; c < rho.dim_; ++c) rho.m_[r * rho.dim_ + c] += p * a[r] * std::conj(a[c]);
    }
    return rho;
}

double DensityMatrix::trace() const {
    double t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += m_[i * dim_ + i].real();
    return t;
}

double DensityMatrix::overlap(const DensityMatrix& other) const {
    if (other.dim_ != dim_) throw SimError("density dimension mismatch");
    cplx t = 0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) t += m_[r * dim_ + c] * other.m_[c * dim_ + r];
    return t.real();
}

double DensityMatrix::purity() const { return overlap(*this); }

std::vector<double> DensityMatrix::diagonal() const {
    std::vector<double> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = m_[i * dim_ + i].real();
    return d;
}

}  // namespace qtk
