#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtk/mutator/mutator.hpp"
#include "qtk/simcore/density.hpp"
#include "qtk/testkit/suite.hpp"

namespace qtk {

class BenchError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Largest scale n handled by the specification oracles.
inline constexpr int kOracleMaxQubits = 6;

struct BenchmarkEntry {
    std::string name;
    SubPtr subroutine;
    IOMark io_mark;
    IOType io_type = IOType::Transform;
    /// Binds the benchmark at scale n on a fresh register. io_in holds the
    /// quantum inputs of the mark and io_out its quantum outputs. For CRk the
    /// scale is k; Teleport ignores it. Handle parameters get fixed doubles.
    std::function<Invocation(int n)> bind;
    /// Expected io_out state for a given io_in state at scale n. Set for the
    /// transform benchmarks whose output is a fixed function of the input.
    std::function<StateVector(int n, const StateVector& input)> oracle;
    SuiteDoc default_suite;

    /// True when the mark has at least one quantum register input, so trigger
    /// experiments can prepare inputs for it.
    bool has_quantum_input() const;
};

class Catalog {
public:
    Catalog();
    const Library& library() const { return lib_; }
    const std::vector<BenchmarkEntry>& entries() const { return entries_; }
    const BenchmarkEntry* find(const std::string& name) const;
    /// Throws BenchError for unknown names.
    const BenchmarkEntry& get(const std::string& name) const;
    std::vector<std::string> names() const;
    /// Every default suite, one document per benchmark in catalog order.
    Suite default_suites() const;

private:
    Library lib_;
    std::vector<BenchmarkEntry> entries_;
};

/// The shared immutable catalog: 17 benchmark subroutines plus QPE. Its
/// library also holds the helpers they call (Reset, power doubles, phase
/// oracles) and buggy variants registered for subroutine mutation.
const Catalog& catalog();

// ---------------------------------------------------------------- oracles

/// Dense DFT on n qubits, big-endian in and out: |j> -> 2^{-n/2} sum_k e^{2 pi i jk/2^n} |k>.
std::vector<cplx> spec_qft(int n, const std::vector<cplx>& input);
/// QFT image of |j> as a product of single-qubit states.
StateVector spec_qft_bitwise(int n, std::uint64_t j);

/// Probability that the swap test reads 0: (1 + tr(rho1 rho2)) / 2.
double spec_swap_test(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// |x> -> -|x> for x == K, identity elsewhere, as a polarity-controlled Z on
/// a single register `qs` of n qubits. Named PhaseOracle_<n>_<K>.
Subroutine make_phase_oracle(int n, std::uint64_t K);

/// Exact clock distribution of QPE with the given power subroutine (taking
/// an exponent and the target register) and target input. Outcomes are
/// big-endian clock values.
std::map<std::uint64_t, double> qpe_distribution(int nclock, const Handle& upower, const PreparedInput& target,
                                                 const Library& lib = catalog().library());

/// The io_out part of `state` when it is a product with the remaining qubits.
/// Throws BenchError when it is entangled with them.
StateVector extract_subsystem(const StateVector& state, const std::vector<int>& qubits);

}  // namespace qtk
