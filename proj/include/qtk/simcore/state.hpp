#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtk/simcore/gate.hpp"
#include "qtk/simcore/rng.hpp"

namespace qtk {

inline constexpr int kMaxQubits = 16;

class ResourceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad qubit indices, arity mismatches, overlapping controls/targets.
class SimError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense amplitudes over n qubits. Qubit 0 is the most significant bit of
/// the basis-state index.
class StateVector {
public:
    explicit StateVector(int n_qubits = 0);

    static StateVector basis(int n_qubits, std::uint64_t index);
    /// Takes amplitudes as given; length must be a power of two and the norm 1.
    static StateVector from_amplitudes(std::vector<cplx> amps);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(std::uint64_t index) const { return amps_.at(index); }

    void apply(const Gate& gate, std::span<const int> targets);
    void apply_controlled(const Gate& gate, std::span<const int> controls, std::span<const int> polarities,
                          std::span<const int> targets);

    /// Samples the listed qubits, collapses in place and returns the bits.
    std::vector<int> measure(std::span<const int> qubits, Rng& rng);
    std::vector<int> measure_all(Rng& rng);
    /// Projects the listed qubits onto the given bits and renormalizes.
    /// Returns the probability of that outcome before projection.
    double project(std::span<const int> qubits, std::span<const int> bits);

    /// Outcome value -> probability, outcome bits read in the order given.
    std::map<std::uint64_t, double> distribution(std::span<const int> qubits) const;
    std::vector<double> probabilities() const;

    double norm() const;
    double fidelity(const StateVector& other) const;
    cplx inner(const StateVector& other) const;

    /// Appends `other` as new trailing (least significant) qubits.
    StateVector tensor(const StateVector& other) const;

    /// One line per basis state: `bitstring real imag`.
    std::string dump() const;

    int bit_position(int qubit) const { return n_ - 1 - qubit; }

private:
    void check_qubits(std::span<const int> qubits, const char* what) const;
    void apply_matrix(const std::vector<cplx>& m, std::span<const int> targets, std::uint64_t ctl_mask,
                      std::uint64_t ctl_value);

    int n_;
    std::vector<cplx> amps_;
};

struct MeasurementOutcome {
    std::vector<int> bits;
    StateVector post_state;

    /// Bits read as an integer, first measured qubit most significant.
    std::uint64_t value() const;
};

StateVector new_state(int n_qubits);
void apply_gate(StateVector& state, const Gate& gate, std::span<const int> targets);
void apply_controlled(StateVector& state, const Gate& gate, std::span<const int> controls,
                      std::span<const int> polarities, std::span<const int> targets);
MeasurementOutcome measure(const StateVector& state, std::span<const int> qubits, Rng& rng);
std::map<std::uint64_t, double> exact_distribution(const StateVector& state, std::span<const int> qubits);
double fidelity_with(const StateVector& state, const StateVector& other);

std::vector<int> iota_qubits(int begin, int count);
std::uint64_t bits_to_value(std::span<const int> bits);

}  // namespace qtk
