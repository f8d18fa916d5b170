#include "qtk/qir/ir.hpp"

#include <stdexcept>

namespace qtk {

bool IfStmt::operator==(const IfStmt& o) const {
    return cond == o.cond && then_body == o.then_body && else_body == o.else_body;
}
bool ForStmt::operator==(const ForStmt& o) const {
    return var == o.var && lo == o.lo && hi == o.hi && descending == o.descending && body == o.body;
}
bool RepeatUntil::operator==(const RepeatUntil& o) const {
    return body == o.body && until == o.until && max_iterations == o.max_iterations;
}
bool WithinApply::operator==(const WithinApply& o) const { return within == o.within && apply == o.apply; }
bool Stmt::operator==(const Stmt& o) const { return node == o.node; }

bool Subroutine::operator==(const Subroutine& o) const {
    return name == o.name && params == o.params && body == o.body && returns == o.returns;
}

const Param* Subroutine::param(const std::string& n) const {
    for (const auto& p : params)
        if (p.name == n) return &p;
    return nullptr;
}

int Subroutine::param_index(const std::string& n) const {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].name == n) return static_cast<int>(i);
    return -1;
}

std::string_view param_kind_name(ParamKind k) {
    switch (k) {
        case ParamKind::Int: return "int";
        case ParamKind::Float: return "float";
        case ParamKind::Bool: return "bool";
        case ParamKind::Qubits: return "qubits";
        case ParamKind::Handle: return "sub";
    }
    return "?";
}

void Library::add(Subroutine sub) { add(std::make_shared<const Subroutine>(std::move(sub))); }

void Library::add(SubPtr sub) {
    auto name = sub->name;
    subs_[name] = std::move(sub);
}

SubPtr Library::find(const std::string& name) const {
    auto it = subs_.find(name);
    return it == subs_.end() ? nullptr : it->second;
}

SubPtr Library::get(const std::string& name) const {
    auto s = find(name);
    if (!s) throw std::out_of_range("no subroutine named '" + name + "'");
    return s;
}

std::vector<std::string> Library::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : subs_) out.push_back(k);
    return out;
}

void Library::register_buggy(const std::string& base, const std::string& variant) { buggy_[base].push_back(variant); }

std::vector<std::string> Library::buggy_variants(const std::string& base) const {
    auto it = buggy_.find(base);
    return it == buggy_.end() ? std::vector<std::string>{} : it->second;
}

namespace ir {

Stmt gate(GateKind g, std::vector<QubitRef> targets) { return Stmt{GateApp{g, {}, std::move(targets)}}; }

Stmt gate(GateKind g, Expr angle, std::vector<QubitRef> targets) {
    return Stmt{GateApp{g, std::move(angle), std::move(targets)}};
}

Stmt call(std::string callee, std::vector<ArgExpr> args, bool adjoint, std::vector<std::string> bind) {
    return Stmt{CallApp{std::move(callee), adjoint, std::move(args), std::move(bind)}};
}

Stmt ctrl(std::vector<ControlGroup> groups, Stmt inner) {
    if (auto g = std::get_if<GateApp>(&inner.node)) return Stmt{ControlledApp{std::move(groups), *g}};
    if (auto c = std::get_if<CallApp>(&inner.node)) return Stmt{ControlledApp{std::move(groups), *c}};
    if (auto c = std::get_if<ControlledApp>(&inner.node)) {
        ControlledApp out = *c;
        out.controls.insert(out.controls.begin(), groups.begin(), groups.end());
        return Stmt{std::move(out)};
    }
    throw std::invalid_argument("only gates and calls can be controlled");
}

Stmt measure(std::string var, std::vector<QubitRef> qubits) { return Stmt{MeasureInto{std::move(var), std::move(qubits)}}; }

Stmt if_(Expr cond, Block then_body, Block else_body) {
    return Stmt{IfStmt{std::move(cond), std::move(then_body), std::move(else_body)}};
}

Stmt for_(std::string var, Expr lo, Expr hi, Block body, bool descending) {
    return Stmt{ForStmt{std::move(var), std::move(lo), std::move(hi), descending, std::move(body)}};
}

Stmt repeat(Block body, Expr until, int max_iterations) {
    return Stmt{RepeatUntil{std::move(body), std::move(until), max_iterations}};
}

Stmt within(Block u, Block v) { return Stmt{WithinApply{std::move(u), std::move(v)}}; }

Stmt assign(std::string var, Expr value) { return Stmt{Assign{std::move(var), std::move(value)}}; }

Param int_param(std::string name) { return {std::move(name), ParamKind::Int, {}, {}}; }
Param float_param(std::string name) { return {std::move(name), ParamKind::Float, {}, {}}; }
Param bool_param(std::string name) { return {std::move(name), ParamKind::Bool, {}, {}}; }
Param qubits_param(std::string name, Expr length) { return {std::move(name), ParamKind::Qubits, std::move(length), {}}; }
Param handle_param(std::string name, std::vector<ParamKind> signature) {
    return {std::move(name), ParamKind::Handle, {}, std::move(signature)};
}

}  // namespace ir

}  // namespace qtk
