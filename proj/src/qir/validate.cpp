#include "qtk/qir/validate.hpp"

#include <map>
#include <set>

#include "qtk/qir/variants.hpp"

namespace qtk {

namespace {

struct Scope : TypeEnv {
    std::map<std::string, ExprType> vars;
    std::set<std::string> regs;
    std::map<std::string, const Param*> handles;

    std::optional<ExprType> var_type(const std::string& name) const override {
        auto it = vars.find(name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
    }
    bool is_register(const std::string& name) const override { return regs.count(name) != 0; }
};

ExprType kind_type(ParamKind k) {
    switch (k) {
        case ParamKind::Int: return ExprType::Int;
        case ParamKind::Float: return ExprType::Float;
        case ParamKind::Bool: return ExprType::Bool;
        default: return ExprType::Unknown;
    }
}

class Validator {
public:
    Validator(const Library& lib, std::map<std::string, std::map<std::string, ExprType>>& return_types,
              std::set<std::string>& active)
        : lib_(lib), return_types_(return_types), active_(active) {}

    std::vector<Issue> run(const Subroutine& sub, std::map<std::string, ExprType>* final_vars) {
        name_ = sub.name;
        Scope scope;
        std::set<std::string> names;
        for (const auto& p : sub.params) {
            if (!names.insert(p.name).second) issue("duplicate parameter '" + p.name + "'");
            switch (p.kind) {
                case ParamKind::Qubits: scope.regs.insert(p.name); break;
                case ParamKind::Handle: scope.handles[p.name] = &p; break;
                default: scope.vars[p.name] = kind_type(p.kind); break;
            }
        }
        for (const auto& p : sub.params)
            if (p.kind == ParamKind::Qubits && !p.length.empty()) int_expr(p.length, scope, "length of '" + p.name + "'");
        block(sub.body, scope);
        for (const auto& r : sub.returns)
            if (!scope.vars.count(r)) issue("return value '" + r + "' is never assigned");
        if (final_vars) *final_vars = scope.vars;
        return std::move(issues_);
    }

private:
    void issue(const std::string& msg) { issues_.push_back({name_ + ":" + format_path(path_), msg}); }

    std::optional<ExprType> type_of(const Expr& e, const Scope& s) {
        if (e.empty()) {
            issue("missing expression");
            return std::nullopt;
        }
        try {
            return infer_type(e, s);
        } catch (const ExprError& err) {
            issue(err.what());
            return std::nullopt;
        }
    }

    void int_expr(const Expr& e, const Scope& s, const std::string& what) {
        auto t = type_of(e, s);
        if (t && *t != ExprType::Int) issue(what + " must be an integer: " + e.str());
    }

    void bool_expr(const Expr& e, const Scope& s) {
        auto t = type_of(e, s);
        if (t && *t != ExprType::Bool) issue("condition must be a boolean: " + e.str());
    }

    void ref(const QubitRef& r, const Scope& s) {
        if (!s.regs.count(r.reg)) issue("unknown register '" + r.reg + "'");
        int_expr(r.index, s, "qubit index");
    }

    void qarg(const QArg& q, const Scope& s) {
        if (!s.regs.count(q.reg)) issue("unknown register '" + q.reg + "'");
        if (q.kind != QArg::Kind::Whole) int_expr(q.start, s, "qubit index");
        if (q.kind == QArg::Kind::Slice) int_expr(q.length, s, "slice length");
    }

    void gate(const GateApp& g, const Scope& s) {
        if (static_cast<int>(g.targets.size()) != gate_arity(g.gate))
            issue(std::string(gate_name(g.gate)) + " takes " + std::to_string(gate_arity(g.gate)) + " targets");
        if (gate_has_angle(g.gate)) {
            if (g.angle.empty()) {
                issue(std::string(gate_name(g.gate)) + " needs an angle");
            } else if (auto t = type_of(g.angle, s); t && *t == ExprType::Bool) {
                issue("angle must be numeric");
            }
        } else if (!g.angle.empty()) {
            issue(std::string(gate_name(g.gate)) + " takes no angle");
        }
        for (const auto& r : g.targets) ref(r, s);
    }

    const std::map<std::string, ExprType>& returns_of(const Subroutine& callee) {
        auto it = return_types_.find(callee.name);
        if (it != return_types_.end()) return it->second;
        std::map<std::string, ExprType> vars;
        if (active_.insert(callee.name).second) {
            Validator inner(lib_, return_types_, active_);
            inner.run(callee, &vars);
            active_.erase(callee.name);
        }
        return return_types_[callee.name] = vars;
    }

    void call(const CallApp& c, Scope& s, bool controlled) {
        std::vector<ParamKind> kinds;
        std::vector<const Param*> params;
        SubPtr callee;
        if (auto h = s.handles.find(c.callee); h != s.handles.end()) {
            kinds = h->second->signature;
            if (!c.bind.empty()) issue("cannot bind results of handle '" + c.callee + "'");
        } else if ((callee = lib_.find(c.callee))) {
            for (const auto& p : callee->params) {
                kinds.push_back(p.kind);
                params.push_back(&p);
            }
            if (c.bind.size() > callee->returns.size()) issue("'" + c.callee + "' returns fewer values than bound");
            if (c.adjoint && !is_adjointable(*callee, lib_)) issue("'" + c.callee + "' has no adjoint");
            if (controlled && find_measurement(*callee, lib_)) issue("'" + c.callee + "' measures and cannot be controlled");
        } else {
            issue("unknown subroutine '" + c.callee + "'");
            return;
        }
        if (kinds.size() != c.args.size()) {
            issue("'" + c.callee + "' expects " + std::to_string(kinds.size()) + " arguments, got " +
                  std::to_string(c.args.size()));
            return;
        }
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            const ArgExpr& a = c.args[i];
            switch (kinds[i]) {
                case ParamKind::Int:
                case ParamKind::Float:
                case ParamKind::Bool: {
                    if (a.kind != ArgExpr::Kind::Classical) {
                        issue("argument " + std::to_string(i) + " of '" + c.callee + "' must be classical");
                        break;
                    }
                    auto t = type_of(a.value, s);
                    ExprType want = kind_type(kinds[i]);
                    if (t && *t != want && !(want == ExprType::Float && *t == ExprType::Int))
                        issue("argument " + std::to_string(i) + " of '" + c.callee + "' has the wrong type");
                    break;
                }
                case ParamKind::Qubits:
                    if (a.kind != ArgExpr::Kind::Qubits)
                        issue("argument " + std::to_string(i) + " of '" + c.callee + "' must be qubits");
                    else
                        qarg(a.qubits, s);
                    break;
                case ParamKind::Handle: {
                    if (a.kind != ArgExpr::Kind::Handle) {
                        issue("argument " + std::to_string(i) + " of '" + c.callee + "' must be a subroutine");
                        break;
                    }
                    if (s.handles.count(a.handle)) break;
                    auto target = lib_.find(a.handle);
                    if (!target) {
                        issue("unknown subroutine '" + a.handle + "'");
                    } else if (!params.empty()) {
                        const auto& sig = params[i]->signature;
                        bool ok = target->params.size() == sig.size();
                        for (std::size_t k = 0; ok && k < sig.size(); ++k) ok = target->params[k].kind == sig[k];
                        if (!ok) issue("'" + a.handle + "' does not match the expected signature");
                    }
                    break;
                }
            }
        }
        if (callee) {
            const auto& rt = returns_of(*callee);
            for (std::size_t i = 0; i < c.bind.size() && i < callee->returns.size(); ++i) {
                auto it = rt.find(callee->returns[i]);
                assign_var(c.bind[i], it == rt.end() ? ExprType::Int : it->second, s);
            }
        }
    }

    void assign_var(const std::string& var, ExprType t, Scope& s) {
        if (s.regs.count(var) || s.handles.count(var)) {
            issue("'" + var + "' is not a classical variable");
            return;
        }
        auto it = s.vars.find(var);
        if (it == s.vars.end()) {
            s.vars[var] = t;
        } else if (it->second != t && !(it->second == ExprType::Float && t == ExprType::Int)) {
            issue("'" + var + "' changes type");
        }
    }

    void nested(const Block& b, Scope& s, const char* tag) {
        path_.back().first = tag;
        block(b, s);
        path_.back().first = nullptr;
    }

    void block(const Block& b, Scope& s) {
        path_.emplace_back(nullptr, 0);
        for (std::size_t i = 0; i < b.size(); ++i) {
            path_.back() = {nullptr, static_cast<int>(i)};
            stmt(b[i], s);
        }
        path_.pop_back();
    }

    void stmt(const Stmt& st, Scope& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GateApp>) {
                    gate(n, s);
                } else if constexpr (std::is_same_v<T, CallApp>) {
                    call(n, s, false);
                } else if constexpr (std::is_same_v<T, ControlledApp>) {
                    if (n.controls.empty()) issue("controlled statement without controls");
                    for (const auto& g : n.controls) {
                        qarg(g.qubits, s);
                        for (int p : g.polarity)
                            if (p != 0 && p != 1) issue("polarity must be 0 or 1");
                    }
                    if (auto g = std::get_if<GateApp>(&n.inner))
                        gate(*g, s);
                    else
                        call(std::get<CallApp>(n.inner), s, true);
                } else if constexpr (std::is_same_v<T, MeasureInto>) {
                    if (n.qubits.empty()) issue("measurement of no qubits");
                    for (const auto& r : n.qubits) ref(r, s);
                    assign_var(n.var, ExprType::Int, s);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    bool_expr(n.cond, s);
                    nested(n.then_body, s, "then");
                    nested(n.else_body, s, "else");
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    int_expr(n.lo, s, "loop bound");
                    int_expr(n.hi, s, "loop bound");
                    auto saved = s.vars.find(n.var) == s.vars.end() ? std::optional<ExprType>{} : s.vars[n.var];
                    if (saved && *saved != ExprType::Int) issue("loop variable '" + n.var + "' shadows a non-integer");
                    s.vars[n.var] = ExprType::Int;
                    nested(n.body, s, "body");
                    if (saved)
                        s.vars[n.var] = *saved;
                    else
                        s.vars.erase(n.var);
                } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                    if (n.max_iterations < 1) issue("repeat-until needs a positive iteration bound");
                    nested(n.body, s, "body");
                    bool_expr(n.until, s);
                } else if constexpr (std::is_same_v<T, WithinApply>) {
                    if (!block_adjointable(n.within, lib_)) issue("within block is not adjointable");
                    nested(n.within, s, "within");
                    nested(n.apply, s, "apply");
                } else if constexpr (std::is_same_v<T, Assign>) {
                    if (auto t = type_of(n.value, s)) assign_var(n.var, *t, s);
                }
            },
            st.node);
    }

    const Library& lib_;
    std::map<std::string, std::map<std::string, ExprType>>& return_types_;
    std::set<std::string>& active_;
    std::string name_;
    std::vector<std::pair<const char*, int>> path_;
    std::vector<Issue> issues_;
};

}  // namespace

std::vector<Issue> validate(const Subroutine& sub, const Library& lib) {
    std::map<std::string, std::map<std::string, ExprType>> return_types;
    std::set<std::string> active{sub.name};
    Validator v(lib, return_types, active);
    return v.run(sub, nullptr);
}

}  // namespace qtk
