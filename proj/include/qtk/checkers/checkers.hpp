#pragma once

#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qtk/qir/interp.hpp"
#include "qtk/stateprep/stateprep.hpp"

namespace qtk {

struct CheckVerdict {
    std::string check;
    std::string target;
    bool passed = true;
    int shots = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    std::optional<std::string> witness;  // set whenever passed is false
};

void to_json(nlohmann::json& j, const CheckVerdict& v);

struct StatConfig {
    enum class Method { Auto, ChiSquare, ExactBinomial };
    int shots = 4096;
    double alpha = 0.01;
    Method method = Method::Auto;
    void validate() const;
};

/// A subroutine bound to concrete arguments on a register of n_qubits.
/// io_in receives prepared inputs; io_out holds the quantum output.
struct Invocation {
    const Library* lib = nullptr;
    SubPtr sub;
    std::vector<Argument> args;
    int n_qubits = 0;
    std::vector<int> io_in;
    std::vector<int> io_out;

    std::map<std::string, Value> run(StateVector& state, Rng& rng) const;
    /// Same arguments, different subroutine (for variants sharing a signature).
    Invocation with_sub(SubPtr other) const;
    /// Every qubit index moved up by `offset`; the register grows accordingly.
    Invocation shifted(int offset) const;
    /// Argument list with qubit indices passed through `map`.
    Invocation remapped(const std::vector<int>& map, int n_total) const;
};

/// Lays qubit parameters out consecutively from qubit 0 using their declared
/// lengths (or `widths` for unconstrained ones). io_in = io_out = all qubits.
Invocation bind_auto(const Library& lib, SubPtr sub, const std::map<std::string, Value>& classical,
                     const std::map<std::string, Handle>& handles = {},
                     const std::map<std::string, int>& widths = {});

/// Applies `inverse_expected` to copies of `state` and measures `qubits`
/// (all when empty) `shots` times. Passes iff every outcome is all-zero.
CheckVerdict transform_check(const StateVector& state, const std::function<void(StateVector&)>& inverse_expected,
                             Rng& rng, int shots = 1, std::vector<int> qubits = {});

/// Per-qubit inverse of the QFT image of |j>: qubit k (1-based) gets
/// R1(-2 pi (j mod 2^k) / 2^k) then H; passes iff all measurements are 0.
CheckVerdict qft_output_check(std::uint64_t j, int n, const StateVector& state, Rng& rng, int shots = 1,
                              std::vector<int> qubits = {});
/// The inverse map applied by qft_output_check, on `qubits`.
void qft_output_unprepare(std::uint64_t j, StateVector& state, const std::vector<int>& qubits);

/// Goodness of fit of observed counts to an expected distribution.
CheckVerdict stat_fit(const std::map<std::uint64_t, int>& observed, const std::map<std::uint64_t, double>& expected,
                      const StatConfig& cfg = {});

/// Two-sample chi-square homogeneity test on categorical counts.
CheckVerdict two_sample_fit(const std::map<std::string, int>& a, const std::map<std::string, int>& b, double alpha);

/// Sequential composition used by identity-style checks.
using Step = std::function<void(StateVector&, Rng&)>;
Step step_of(const Invocation& inv);

/// Samples an input of each kind in turn on io_in, runs the steps, unprepares
/// on io_out and passes iff io_out reads all-zero on every trial.
CheckVerdict identity_check(const std::vector<Step>& steps, int n_qubits, const std::vector<int>& io_in,
                            const std::vector<int>& io_out, int trials, const std::vector<InputKind>& kinds,
                            Rng& rng, const std::string& target = {});
CheckVerdict identity_check(const Invocation& inv, int trials, const std::vector<InputKind>& kinds, Rng& rng);

/// p1 then inverse(p2) as an identity check when p2 is adjointable,
/// otherwise per-input two-sample tests of the output statistics.
CheckVerdict equivalence_check(const Invocation& p1, const Invocation& p2, int trials, Rng& rng,
                               const std::vector<InputKind>& kinds = {InputKind::CI, InputKind::CSI, InputKind::RTI},
                               const StatConfig& cfg = {});

/// Hand-written variants under test; generated ones are used where absent.
/// `power` takes the exponent as an extra leading integer parameter;
/// `controlled` takes the control register as an extra leading parameter.
struct VariantSet {
    SubPtr inverse;
    SubPtr power;
    SubPtr controlled;
};

/// InvP then P = I; PowP(k) then InvP^k (k > 0) or P^|k| (k < 0) = I for
/// k in {-2, -1, 2, 3}; CtrlP with two control qubits acts as P when they
/// are |11> and as I for the other basis patterns.
CheckVerdict variant_checks(const Invocation& p, const VariantSet& variants, int trials, Rng& rng,
                            const std::vector<InputKind>& kinds = {InputKind::CI, InputKind::CSI, InputKind::RTI});

/// Static scan for reachable measurements (optional), then SwapTest purity
/// estimates over sampled superposition inputs. Supports up to 7 qubits.
CheckVerdict unitarity_check(const Invocation& p, int trials, int shots_per_purity, Rng& rng, bool static_scan = true);

}  // namespace qtk
