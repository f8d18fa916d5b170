#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qtk/qir/expr.hpp"
#include "qtk/simcore/gate.hpp"

namespace qtk {

/// reg[index]
struct QubitRef {
    std::string reg;
    Expr index;
    bool operator==(const QubitRef&) const = default;
};

/// A qubit-array argument: a whole register, one element, or a contiguous slice.
struct QArg {
    enum class Kind { Whole, Elem, Slice };
    Kind kind = Kind::Whole;
    std::string reg;
    Expr start;   // Elem index or Slice start
    Expr length;  // Slice only
    bool operator==(const QArg&) const = default;
};

/// Controls with per-qubit polarity; an empty polarity list means all ones.
struct ControlGroup {
    QArg qubits;
    std::vector<int> polarity;
    bool operator==(const ControlGroup&) const = default;
};

struct ArgExpr {
    enum class Kind { Classical, Qubits, Handle };
    Kind kind = Kind::Classical;
    Expr value;
    QArg qubits;
    std::string handle;
    bool operator==(const ArgExpr&) const = default;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct GateApp {
    GateKind gate = GateKind::X;
    Expr angle;
    std::vector<QubitRef> targets;
    bool operator==(const GateApp&) const = default;
};

struct CallApp {
    std::string callee;
    bool adjoint = false;
    std::vector<ArgExpr> args;
    std::vector<std::string> bind;  // caller variables receiving the callee's returns
    bool operator==(const CallApp&) const = default;
};

struct ControlledApp {
    std::vector<ControlGroup> controls;
    std::variant<GateApp, CallApp> inner;
    bool operator==(const ControlledApp&) const = default;
};

struct MeasureInto {
    std::string var;
    std::vector<QubitRef> qubits;
    bool operator==(const MeasureInto&) const = default;
};

struct IfStmt {
    Expr cond;
    Block then_body;
    Block else_body;
    bool operator==(const IfStmt&) const;
};

/// Inclusive bounds; descending runs hi down to lo.
struct ForStmt {
    std::string var;
    Expr lo;
    Expr hi;
    bool descending = false;
    Block body;
    bool operator==(const ForStmt&) const;
};

struct RepeatUntil {
    Block body;
    Expr until;
    int max_iterations = 1000;
    bool operator==(const RepeatUntil&) const;
};

struct WithinApply {
    Block within;
    Block apply;
    bool operator==(const WithinApply&) const;
};

struct Assign {
    std::string var;
    Expr value;
    bool operator==(const Assign&) const = default;
};

struct Stmt {
    std::variant<GateApp, ControlledApp, CallApp, MeasureInto, IfStmt, ForStmt, RepeatUntil, WithinApply, Assign> node;
    bool operator==(const Stmt&) const;
};

enum class ParamKind { Int, Float, Bool, Qubits, Handle };
std::string_view param_kind_name(ParamKind k);

struct Param {
    std::string name;
    ParamKind kind = ParamKind::Int;
    Expr length;                      // Qubits only; empty means any length
    std::vector<ParamKind> signature;  // Handle only
    bool operator==(const Param&) const = default;
};

struct Subroutine {
    std::string name;
    std::vector<Param> params;
    Block body;
    std::vector<std::string> returns;
    bool operator==(const Subroutine&) const;

    const Param* param(const std::string& n) const;
    int param_index(const std::string& n) const;
};

using SubPtr = std::shared_ptr<const Subroutine>;

/// Named subroutines visible to calls, plus known-buggy alternatives used by
/// subroutine mutation.
class Library {
public:
    void add(Subroutine sub);
    void add(SubPtr sub);
    SubPtr find(const std::string& name) const;
    SubPtr get(const std::string& name) const;
    bool contains(const std::string& name) const { return subs_.count(name) != 0; }
    std::vector<std::string> names() const;

    void register_buggy(const std::string& base, const std::string& variant);
    std::vector<std::string> buggy_variants(const std::string& base) const;

private:
    std::map<std::string, SubPtr> subs_;
    std::map<std::string, std::vector<std::string>> buggy_;
};

/// Builder helpers.
namespace ir {

inline Expr V(std::string name) { return Expr::var(std::move(name)); }
inline Expr fn(std::string name, std::vector<Expr> args) { return Expr::call(std::move(name), std::move(args)); }

inline QubitRef at(std::string reg, Expr index) { return {std::move(reg), std::move(index)}; }
inline QArg whole(std::string reg) { return {QArg::Kind::Whole, std::move(reg), {}, {}}; }
inline QArg elem(std::string reg, Expr index) { return {QArg::Kind::Elem, std::move(reg), std::move(index), {}}; }
inline QArg slice(std::string reg, Expr start, Expr length) {
    return {QArg::Kind::Slice, std::move(reg), std::move(start), std::move(length)};
}

inline ArgExpr carg(Expr e) { return {ArgExpr::Kind::Classical, std::move(e), {}, {}}; }
inline ArgExpr qarg(QArg q) { return {ArgExpr::Kind::Qubits, {}, std::move(q), {}}; }
inline ArgExpr harg(std::string name) { return {ArgExpr::Kind::Handle, {}, {}, std::move(name)}; }

inline ControlGroup controls(QArg q, std::vector<int> polarity = {}) { return {std::move(q), std::move(polarity)}; }

Stmt gate(GateKind g, std::vector<QubitRef> targets);
Stmt gate(GateKind g, Expr angle, std::vector<QubitRef> targets);
Stmt call(std::string callee, std::vector<ArgExpr> args, bool adjoint = false, std::vector<std::string> bind = {});
Stmt ctrl(std::vector<ControlGroup> groups, Stmt inner);
Stmt measure(std::string var, std::vector<QubitRef> qubits);
Stmt if_(Expr cond, Block then_body, Block else_body = {});
Stmt for_(std::string var, Expr lo, Expr hi, Block body, bool descending = false);
Stmt repeat(Block body, Expr until, int max_iterations = 1000);
Stmt within(Block u, Block v);
Stmt assign(std::string var, Expr value);

Param int_param(std::string name);
Param float_param(std::string name);
Param bool_param(std::string name);
Param qubits_param(std::string name, Expr length = {});
Param handle_param(std::string name, std::vector<ParamKind> signature);

}  // namespace ir

}  // namespace qtk
