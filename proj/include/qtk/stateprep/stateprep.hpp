#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtk/qir/ir.hpp"
#include "qtk/simcore/rng.hpp"
#include "qtk/simcore/state.hpp"

namespace qtk {

class PrepError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One gate on qubits numbered relative to the prepared register.
struct GateOp {
    Gate gate;
    std::vector<int> qubits;
};

/// STV draws |x>, (|x>+|y>)/sqrt2 or (|x>+i|y>)/sqrt2 with equal odds.
enum class InputKind { CI, RTI, CSI, PAULI, STV };
std::string_view input_kind_name(InputKind k);
InputKind input_kind_from(std::string_view s);

/// A gate recipe that builds an input state from |0...0>.
class PreparedInput {
public:
    PreparedInput() = default;
    PreparedInput(int n_qubits, std::string description, std::vector<GateOp> ops, bool has_unprepare = true);

    int n_qubits() const { return n_; }
    const std::string& description() const { return desc_; }
    const std::vector<GateOp>& ops() const { return ops_; }
    bool has_unprepare() const { return unprep_; }

    /// Appends the recipe on `qubits` (relative qubit i maps to qubits[i]).
    void prepare(StateVector& state, std::span<const int> qubits) const;
    void prepare(StateVector& state) const;
    /// Inverse recipe. Throws PrepError when the input has no unprepare.
    void unprepare(StateVector& state, std::span<const int> qubits) const;
    void unprepare(StateVector& state) const;

    /// The prepared state on a fresh register.
    StateVector state() const;

    /// Recipe as a subroutine with a single qubit parameter `qs` of length n.
    Subroutine as_subroutine(const std::string& name) const;

private:
    int n_ = 0;
    std::string desc_;
    std::vector<GateOp> ops_;
    bool unprep_ = true;
};

/// |x>, X on each 1-bit. Qubit 0 holds the most significant bit of x.
PreparedInput gen_ket_x(int n, std::uint64_t x);
/// (|x> + e^{i theta}|~x>)/sqrt2.
PreparedInput gen_comp_sup(int n, std::uint64_t x, double theta);
/// (|x> + e^{i theta}|y>)/sqrt2 for x != y.
PreparedInput gen_two_value(int n, std::uint64_t x, std::uint64_t y, double theta);
/// Product of single-qubit Pauli eigenstates, one index in 1..6 per qubit:
/// |0>, |1>, |+>, |->, |+i>, |-i>.
PreparedInput gen_pauli(const std::vector<int>& indices);

struct Ensemble {
    std::vector<std::pair<double, PreparedInput>> entries;
    /// Throws PrepError unless probabilities are non-negative and sum to 1.
    void validate() const;
};

/// Draws one ensemble member; repeated draws realize the mixed state.
PreparedInput gen_mixed(const Ensemble& ensemble, Rng& rng);
/// 2^n equally weighted basis states.
Ensemble max_mixed_ensemble(int n);
/// The ensemble as a measuring subroutine on `qs`: random bits are drawn by
/// measuring |+> on the leading qubits, which are then reset before the
/// chosen member is prepared. Probabilities must be multiples of 2^-m with
/// m no larger than the member width.
Subroutine ensemble_subroutine(const Ensemble& ensemble, const std::string& name);

PreparedInput sample_input(InputKind kind, int n, Rng& rng);
/// One of |x>, (|x>+|y>)/sqrt2, (|x>+i|y>)/sqrt2 chosen uniformly.
PreparedInput sample_stv(int n, Rng& rng);

struct ScaqResult {
    bool pass = false;
    std::vector<int> uncovered;
};
/// Qubit k is covered when some input gives both outcomes of k with
/// probability above eps.
ScaqResult scaq_check(const std::vector<StateVector>& inputs, double eps = 1e-9);

/// Generator reference as written in suite files, e.g.
/// `comp_sup(n=3, x=5, theta=pi/2)`, `pauli(1, 3, 6)`,
/// `mixed([0.5, ket_x(n=1, x=0)], [0.5, ket_x(n=1, x=1)])`, `sample(kind=CSI, n=4)`.
struct GenArg;
struct GeneratorSpec {
    std::string name;
    std::vector<std::pair<std::string, GenArg>> args;  // empty key for positional

    static GeneratorSpec parse(std::string_view text);
    std::string str() const;
    /// Realizes the spec. Random generators draw from `rng`.
    PreparedInput realize(Rng& rng) const;
    /// IR form for use as a subroutine argument. Mixed specs keep their
    /// randomness (see ensemble_subroutine); `sample` is drawn once.
    Subroutine to_subroutine(const std::string& sub_name, Rng& rng) const;
    /// Number of qubits the spec prepares.
    int n_qubits() const;
    /// True when realize() draws from the rng.
    bool random() const;
};

struct GenArg {
    enum class Kind { Number, Word, List, Spec };
    Kind kind = Kind::Number;
    double number = 0;
    std::string word;
    std::vector<GenArg> list;
    std::vector<GeneratorSpec> spec;  // exactly one element when kind == Spec
    std::string str() const;
};

}  // namespace qtk
