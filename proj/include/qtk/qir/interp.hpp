#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qtk/qir/ir.hpp"
#include "qtk/simcore/state.hpp"

namespace qtk {

enum class FaultKind { IndexOutOfRange, Divergence, Arity, Type, Unbound, Arithmetic, Qubit, Variant };
std::string_view fault_kind_name(FaultKind k);

/// Runtime failure of an executing program.
class Fault : public std::runtime_error {
public:
    Fault(FaultKind kind, const std::string& message, std::string site = {})
        : std::runtime_error(message), kind_(kind), site_(std::move(site)) {}
    FaultKind kind() const { return kind_; }
    const std::string& site() const { return site_; }

private:
    FaultKind kind_;
    std::string site_;
};

/// A subroutine value passed through a handle parameter, with leading
/// classical arguments already bound.
struct Handle {
    SubPtr sub;
    std::vector<Value> bound;
};

using Argument = std::variant<Value, std::vector<int>, Handle>;

inline Argument arg_int(std::int64_t v) { return Value{v}; }
inline Argument arg_float(double v) { return Value{v}; }
inline Argument arg_bool(bool v) { return Value{v}; }
inline Argument arg_qubits(std::vector<int> q) { return q; }
inline Argument arg_handle(SubPtr sub, std::vector<Value> bound = {}) { return Handle{std::move(sub), std::move(bound)}; }

struct MeasurementRecord {
    std::string site;
    std::vector<int> bits;
};

struct ExecutionResult {
    std::map<std::string, Value> classical_outputs;
    StateVector final_state;
    std::vector<MeasurementRecord> measurement_log;
};

struct ExecOptions {
    int max_call_depth = 64;
};

/// Runs `sub` on `state`. Throws Fault on runtime errors.
ExecutionResult execute(const Library& lib, const Subroutine& sub, const std::vector<Argument>& args,
                        StateVector state, Rng& rng, const ExecOptions& opts = {});

/// Runs in place; returns the classical outputs.
std::map<std::string, Value> run_in_place(const Library& lib, const Subroutine& sub,
                                          const std::vector<Argument>& args, StateVector& state, Rng& rng,
                                          std::vector<MeasurementRecord>* log = nullptr,
                                          const ExecOptions& opts = {});

/// Evaluates the qubit-array lengths of `sub` given its classical arguments
/// (by parameter name). Parameters without a length expression are skipped.
std::map<std::string, std::int64_t> param_lengths(const Subroutine& sub, const std::map<std::string, Value>& classical);

}  // namespace qtk
