#include "qtk/simcore/state.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace qtk {

std::uint64_t bits_to_value(std::span<const int> bits) {
    std::uint64_t v = 0;
    for (int b : bits) v = (v << 1) | static_cast<std::uint64_t>(b & 1);
    return v;
}

std::uint64_t MeasurementOutcome::value() const { return bits_to_value(bits); }

std::vector<int> iota_qubits(int begin, int count) {
    std::vector<int> q(static_cast<std::size_t>(count));
    std::iota(q.begin(), q.end(), begin);
    return q;
}

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0) throw SimError("negative qubit count");
    if (n_qubits > kMaxQubits)
        throw ResourceError("state of " + std::to_string(n_qubits) + " qubits exceeds cap of " +
                            std::to_string(kMaxQubits));
    amps_.assign(std::size_t{1} << n_qubits, cplx(0, 0));
    amps_[0] = 1;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) throw SimError("basis index out of range");
    s.amps_[0] = 0;
    s.amps_[index] = 1;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    std::size_t d = amps.size();
    if (d == 0 || (d & (d - 1)) != 0) throw SimError("amplitude count is not a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < d) ++n;
    StateVector s(n);
    s.amps_ = std::move(amps);
    if (std::abs(s.norm() - 1.0) > 1e-9) throw SimError("amplitudes are not normalized");
    return s;
}

void StateVector::check_qubits(std::span<const int> qubits, const char* what) const {
    for (std::size_t a = 0; a < qubits.size(); ++a) {
        if (qubits[a] < 0 || qubits[a] >= n_)
            throw SimError(std::string(what) + " qubit " + std::to_string(qubits[a]) + " out of range for " +
                           std::to_string(n_) + " qubits");
        for (std::size_t b = a + 1; b < qubits.size(); ++b)
            if (qubits[a] == qubits[b]) throw SimError(std::string(what) + " qubits not distinct");
    }
}

void StateVector::apply(const Gate& gate, std::span<const int> targets) {
    apply_controlled(gate, {}, {}, targets);
}

void StateVector::apply_controlled(const Gate& gate, std::span<const int> controls, std::span<const int> polarities,
                                   std::span<const int> targets) {
    if (static_cast<int>(targets.size()) != gate.arity())
        throw SimError("gate " + std::string(gate_name(gate.kind)) + " expects " + std::to_string(gate.arity()) +
                       " targets, got " + std::to_string(targets.size()));
    if (polarities.size() != controls.size()) throw SimError("polarity count differs from control count");
    check_qubits(targets, "target");
    check_qubits(controls, "control");
    std::uint64_t mask = 0, value = 0;
    for (std::size_t c = 0; c < controls.size(); ++c) {
        for (int t : targets)
            if (t == controls[c]) throw SimError("control overlaps target");
        std::uint64_t bit = std::uint64_t{1} << bit_position(controls[c]);
        mask |= bit;
        if (polarities[c]) value |= bit;
    }
    apply_matrix(gate.matrix(), targets, mask, value);
}

void StateVector::apply_matrix(const std::vector<cplx>& m, std::span<const int> targets, std::uint64_t ctl_mask,
                               std::uint64_t ctl_value) {
    const std::size_t k = targets.size();
    const std::size_t sub = std::size_t{1} << k;
    std::uint64_t tmask = 0;
    std::vector<std::uint64_t> offset(sub, 0);
    for (std::size_t r = 0; r < sub; ++r)
        for (std::size_t t = 0; t < k; ++t)
            if ((r >> (k - 1 - t)) & 1) offset[r] |= std::uint64_t{1} << bit_position(targets[t]);
    for (int t : targets) tmask |= std::uint64_t{1} << bit_position(t);

    std::vector<cplx> in(sub), out(sub);
    for (std::uint64_t base = 0; base < amps_.size(); ++base) {
        if ((base & tmask) != 0 || (base & ctl_mask) != ctl_value) continue;
        for (std::size_t r = 0; r < sub; ++r) in[r] = amps_[base | offset[r]];
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc = 0;
            for (std::size_t c = 0; c < sub; ++c) acc += m[r * sub + c] * in[c];
            out[r] = acc;
        }
        for (std::size_t r = 0; r < sub; ++r) amps_[base | offset[r]] = out[r];
    }
}

std::map<std::uint64_t, double> StateVector::distribution(std::span<const int> qubits) const {
    check_qubits(qubits, "measured");
    std::map<std::uint64_t, double> dist;
    const std::size_t k = qubits.size();
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) dist[v] = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        double p = std::norm(amps_[i]);
        if (p == 0.0) continue;
        std::uint64_t v = 0;
        for (std::size_t t = 0; t < k; ++t) v = (v << 1) | ((i >> bit_position(qubits[t])) & 1);
        dist[v] += p;
    }
    return dist;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
}

double StateVector::project(std::span<const int> qubits, std::span<const int> bits) {
    check_qubits(qubits, "measured");
    std::uint64_t mask = 0, value = 0;
    for (std::size_t t = 0; t < qubits.size(); ++t) {
        std::uint64_t bit = std::uint64_t{1} << bit_position(qubits[t]);
        mask |= bit;
        if (bits[t]) value |= bit;
    }
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i)
        if ((i & mask) == value) p += std::norm(amps_[i]);
    if (p <= 0.0) throw SimError("projection onto a zero-probability outcome");
    const double scale = 1.0 / std::sqrt(p);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) amps_[i] = (i & mask) == value ? amps_[i] * scale : cplx(0, 0);
    return p;
}

std::vector<int> StateVector::measure(std::span<const int> qubits, Rng& rng) {
    check_qubits(qubits, "measured");
    const double r = rng.uniform();
    const std::size_t k = qubits.size();
    // Sample a full basis index by cumulative probability, then read the bits.
    double acc = 0.0;
    std::uint64_t chosen = amps_.size() - 1;
    double total = norm();
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        acc += std::norm(amps_[i]);
        if (r * total < acc) {
            chosen = i;
            break;
        }
    }
    while (std::norm(amps_[chosen]) == 0.0 && chosen > 0) --chosen;
    std::vector<int> bits(k);
    for (std::size_t t = 0; t < k; ++t) bits[t] = static_cast<int>((chosen >> bit_position(qubits[t])) & 1);
    project(qubits, bits);
    return bits;
}

std::vector<int> StateVector::measure_all(Rng& rng) {
    auto q = iota_qubits(0, n_);
    return measure(q, rng);
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

cplx StateVector::inner(const StateVector& other) const {
    if (other.n_ != n_) throw SimError("qubit count mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
}

double StateVector::fidelity(const StateVector& other) const { return std::norm(inner(other)); }

StateVector StateVector::tensor(const StateVector& other) const {
    StateVector out(n_ + other.n_);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        for (std::size_t j = 0; j < other.amps_.size(); ++j) out.amps_[i * other.amps_.size() + j] = amps_[i] * other.amps_[j];
    return out;
}

std::string StateVector::dump() const {
    std::ostringstream os;
    char buf[96];
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        std::string bits(static_cast<std::size_t>(n_), '0');
        for (int q = 0; q < n_; ++q)
            if ((i >> bit_position(q)) & 1) bits[static_cast<std::size_t>(q)] = '1';
        std::snprintf(buf, sizeof buf, " %.17g %.17g\n", amps_[i].real(), amps_[i].imag());
        os << bits << buf;
    }
    return os.str();
}

StateVector new_state(int n_qubits) { return StateVector(n_qubits); }

void apply_gate(StateVector& state, const Gate& gate, std::span<const int> targets) { state.apply(gate, targets); }

void apply_controlled(StateVector& state, const Gate& gate, std::span<const int> controls,
                      std::span<const int> polarities, std::span<const int> targets) {
    state.apply_controlled(gate, controls, polarities, targets);
}

MeasurementOutcome measure(const StateVector& state, std::span<const int> qubits, Rng& rng) {
    MeasurementOutcome out{{}, state};
    out.bits = out.post_state.measure(qubits, rng);
    return out;
}

std::map<std::uint64_t, double> exact_distribution(const StateVector& state, std::span<const int> qubits) {
    return state.distribution(qubits);
}

double fidelity_with(const StateVector& state, const StateVector& other) { return state.fidelity(other); }

}  // namespace qtk
