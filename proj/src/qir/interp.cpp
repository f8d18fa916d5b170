#include "qtk/qir/interp.hpp"

#include <unordered_map>

#include "qtk/qir/variants.hpp"

namespace qtk {

std::string_view fault_kind_name(FaultKind k) {
    switch (k) {
        case FaultKind::IndexOutOfRange: return "index-out-of-range";
        case FaultKind::Divergence: return "divergence";
        case FaultKind::Arity: return "arity";
        case FaultKind::Type: return "type";
        case FaultKind::Unbound: return "unbound";
        case FaultKind::Arithmetic: return "arithmetic";
        case FaultKind::Qubit: return "qubit";
        case FaultKind::Variant: return "variant";
    }
    return "?";
}

namespace {

struct Frame : EvalEnv {
    const Subroutine* sub = nullptr;
    std::unordered_map<std::string, Value> vars;
    std::unordered_map<std::string, std::vector<int>> regs;
    std::unordered_map<std::string, Handle> handles;

    const Value* lookup(const std::string& name) const override {
        auto it = vars.find(name);
        return it == vars.end() ? nullptr : &it->second;
    }
    std::optional<std::int64_t> register_length(const std::string& name) const override {
        auto it = regs.find(name);
        if (it == regs.end()) return std::nullopt;
        return static_cast<std::int64_t>(it->second.size());
    }
};

struct MapEnv : EvalEnv {
    std::unordered_map<std::string, Value> vars;
    const Value* lookup(const std::string& name) const override {
        auto it = vars.find(name);
        return it == vars.end() ? nullptr : &it->second;
    }
};

class Machine {
public:
    Machine(const Library& lib, StateVector& st, Rng& rng, std::vector<MeasurementRecord>* log, const ExecOptions& opts)
        : lib_(lib), st_(st), rng_(rng), log_(log), opts_(opts) {}

    std::map<std::string, Value> invoke(const Subroutine& sub, const std::vector<Argument>& args) {
        std::map<std::string, Value> outs;
        Frame frame;
        bind(sub, args, frame);
        run(sub.body, frame);
        for (const auto& r : sub.returns) {
            const Value* v = frame.lookup(r);
            if (!v) throw fault(FaultKind::Unbound, "return value '" + r + "' never assigned");
            outs[r] = *v;
        }
        return outs;
    }

private:
    Fault fault(FaultKind k, const std::string& msg) const {
        std::string site = (sub_name_.empty() ? std::string("?") : sub_name_) + ":" + format_path(path_);
        return Fault(k, msg + " at " + site, site);
    }

    void bind(const Subroutine& sub, const std::vector<Argument>& args, Frame& frame) {
        if (args.size() != sub.params.size())
            throw fault(FaultKind::Arity, sub.name + " expects " + std::to_string(sub.params.size()) +
                                              " arguments, got " + std::to_string(args.size()));
        frame.sub = &sub;
        for (std::size_t i = 0; i < args.size(); ++i) {
            const Param& p = sub.params[i];
            const Argument& a = args[i];
            switch (p.kind) {
                case ParamKind::Int:
                case ParamKind::Float:
                case ParamKind::Bool: {
                    auto v = std::get_if<Value>(&a);
                    if (!v) throw fault(FaultKind::Type, "parameter '" + p.name + "' of " + sub.name + " is classical");
                    Value val = *v;
                    if (p.kind == ParamKind::Float && std::holds_alternative<std::int64_t>(val))
                        val = static_cast<double>(std::get<std::int64_t>(val));
                    bool ok = (p.kind == ParamKind::Int && std::holds_alternative<std::int64_t>(val)) ||
                              (p.kind == ParamKind::Float && std::holds_alternative<double>(val)) ||
                              (p.kind == ParamKind::Bool && std::holds_alternative<bool>(val));
                    if (!ok) throw fault(FaultKind::Type, "argument for '" + p.name + "' of " + sub.name + " has wrong type");
                    frame.vars[p.name] = val;
                    break;
                }
                case ParamKind::Qubits: {
                    auto q = std::get_if<std::vector<int>>(&a);
                    if (!q) throw fault(FaultKind::Type, "parameter '" + p.name + "' of " + sub.name + " is a qubit array");
                    frame.regs[p.name] = *q;
                    break;
                }
                case ParamKind::Handle: {
                    auto h = std::get_if<Handle>(&a);
                    if (!h || !h->sub) throw fault(FaultKind::Type, "parameter '" + p.name + "' of " + sub.name + " is a subroutine");
                    if (h->sub->params.size() != h->bound.size() + p.signature.size())
                        throw fault(FaultKind::Arity, "subroutine '" + h->sub->name + "' does not match the signature of '" +
                                                          p.name + "'");
                    for (std::size_t k = 0; k < p.signature.size(); ++k)
                        if (h->sub->params[h->bound.size() + k].kind != p.signature[k])
                            throw fault(FaultKind::Arity, "subroutine '" + h->sub->name +
                                                              "' does not match the signature of '" + p.name + "'");
                    frame.handles[p.name] = *h;
                    break;
                }
            }
        }
        for (const auto& p : sub.params) {
            if (p.kind != ParamKind::Qubits || p.length.empty()) continue;
            std::int64_t want = eval_int(p.length, frame, "register length");
            if (want != static_cast<std::int64_t>(frame.regs[p.name].size()))
                throw fault(FaultKind::Arity, "register '" + p.name + "' of " + sub.name + " needs " + std::to_string(want) +
                                                  " qubits, got " + std::to_string(frame.regs[p.name].size()));
        }
    }

    Value eval(const Expr& e, const Frame& f) {
        try {
            return evaluate(e, f);
        } catch (const ExprError& err) {
            FaultKind k = err.kind == ExprError::Kind::Unbound  ? FaultKind::Unbound
                          : err.kind == ExprError::Kind::Arithmetic ? FaultKind::Arithmetic
                                                                    : FaultKind::Type;
            throw fault(k, err.what());
        }
    }

    std::int64_t eval_int(const Expr& e, const Frame& f, const char* what) {
        Value v = eval(e, f);
        if (auto i = std::get_if<std::int64_t>(&v)) return *i;
        throw fault(FaultKind::Type, std::string(what) + " is not an integer: " + e.str());
    }

    bool eval_bool(const Expr& e, const Frame& f) {
        Value v = eval(e, f);
        if (auto b = std::get_if<bool>(&v)) return *b;
        throw fault(FaultKind::Type, "condition is not a boolean: " + e.str());
    }

    const std::vector<int>& reg(const std::string& name, const Frame& f) {
        auto it = f.regs.find(name);
        if (it == f.regs.end()) throw fault(FaultKind::Unbound, "unknown register '" + name + "'");
        return it->second;
    }

    int qubit(const QubitRef& r, const Frame& f) {
        const auto& q = reg(r.reg, f);
        std::int64_t i = eval_int(r.index, f, "qubit index");
        if (i < 0 || i >= static_cast<std::int64_t>(q.size()))
            throw fault(FaultKind::IndexOutOfRange, "index " + std::to_string(i) + " out of range for '" + r.reg +
                                                        "' of length " + std::to_string(q.size()));
        return q[static_cast<std::size_t>(i)];
    }

    std::vector<int> qubits(const QArg& a, const Frame& f) {
        const auto& q = reg(a.reg, f);
        const auto size = static_cast<std::int64_t>(q.size());
        switch (a.kind) {
            case QArg::Kind::Whole: return q;
            case QArg::Kind::Elem: return {qubit(QubitRef{a.reg, a.start}, f)};
            case QArg::Kind::Slice: {
                std::int64_t s = eval_int(a.start, f, "slice start");
                std::int64_t n = eval_int(a.length, f, "slice length");
                if (s < 0 || n < 0 || s + n > size)
                    throw fault(FaultKind::IndexOutOfRange, "slice [" + std::to_string(s) + ", +" + std::to_string(n) +
                                                                ") out of range for '" + a.reg + "'");
                return std::vector<int>(q.begin() + s, q.begin() + s + n);
            }
        }
        return {};
    }

    void run(const Block& block, Frame& f) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            path_.back() = {nullptr, static_cast<int>(i)};
            exec(block[i], f);
        }
    }

    void run_nested(const Block& block, Frame& f, const char* tag) {
        path_.back().first = tag;
        path_.emplace_back(nullptr, 0);
        run(block, f);
        path_.pop_back();
    }

    void apply_gate(const GateApp& g, const Frame& f) {
        Gate gate(g.gate);
        if (gate_has_angle(g.gate)) {
            if (g.angle.empty()) throw fault(FaultKind::Type, "rotation without angle");
            Value v = eval(g.angle, f);
            if (std::holds_alternative<bool>(v)) throw fault(FaultKind::Type, "angle is not numeric");
            gate.theta = as_float(v, "angle");
        }
        std::vector<int> targets;
        targets.reserve(g.targets.size());
        for (const auto& t : g.targets) targets.push_back(qubit(t, f));
        try {
            st_.apply_controlled(gate, ctl_q_, ctl_p_, targets);
        } catch (const SimError& e) {
            throw fault(FaultKind::Qubit, e.what());
        }
    }

    SubPtr adjoint(const SubPtr& s) {
        auto it = adj_cache_.find(s.get());
        if (it != adj_cache_.end()) return it->second;
        SubPtr inv;
        try {
            inv = std::make_shared<const Subroutine>(inverse_of(*s, lib_));
        } catch (const VariantError& e) {
            throw fault(FaultKind::Variant, e.what());
        }
        adj_cache_.emplace(s.get(), inv);
        keep_.push_back(s);
        return inv;
    }

    void do_call(const CallApp& c, Frame& f) {
        if (++depth_ > opts_.max_call_depth) throw fault(FaultKind::Divergence, "call depth limit exceeded");
        SubPtr callee;
        std::vector<Argument> args;
        if (auto h = f.handles.find(c.callee); h != f.handles.end()) {
            callee = h->second.sub;
            for (const auto& v : h->second.bound) args.emplace_back(v);
        } else {
            callee = lib_.find(c.callee);
            if (!callee) throw fault(FaultKind::Unbound, "unknown subroutine '" + c.callee + "'");
        }
        for (const auto& a : c.args) {
            switch (a.kind) {
                case ArgExpr::Kind::Classical: args.emplace_back(eval(a.value, f)); break;
                case ArgExpr::Kind::Qubits: args.emplace_back(qubits(a.qubits, f)); break;
                case ArgExpr::Kind::Handle: {
                    if (auto h = f.handles.find(a.handle); h != f.handles.end()) {
                        args.emplace_back(h->second);
                    } else if (auto s = lib_.find(a.handle)) {
                        args.emplace_back(Handle{s, {}});
                    } else {
                        throw fault(FaultKind::Unbound, "unknown subroutine '" + a.handle + "'");
                    }
                    break;
                }
            }
        }
        if (c.adjoint) callee = adjoint(callee);

        auto saved_path = std::move(path_);
        auto saved_name = std::move(sub_name_);
        path_ = {{nullptr, 0}};
        sub_name_ = callee->name;
        std::map<std::string, Value> outs;
        {
            Frame inner;
            bind(*callee, args, inner);
            run(callee->body, inner);
            for (const auto& r : callee->returns) {
                const Value* v = inner.lookup(r);
                if (!v) throw fault(FaultKind::Unbound, "return value '" + r + "' never assigned");
                outs[r] = *v;
            }
        }
        path_ = std::move(saved_path);
        sub_name_ = std::move(saved_name);
        if (c.bind.size() > callee->returns.size())
            throw fault(FaultKind::Arity, "call binds more values than " + callee->name + " returns");
        for (std::size_t i = 0; i < c.bind.size(); ++i) f.vars[c.bind[i]] = outs[callee->returns[i]];
        --depth_;
    }

    void exec(const Stmt& s, Frame& f) {
        std::visit([&](const auto& n) { exec_node(n, f); }, s.node);
    }

    void exec_node(const GateApp& g, Frame& f) { apply_gate(g, f); }

    void exec_node(const CallApp& c, Frame& f) { do_call(c, f); }

    void exec_node(const ControlledApp& c, Frame& f) {
        std::size_t pushed = 0;
        for (const auto& g : c.controls) {
            auto q = qubits(g.qubits, f);
            if (!g.polarity.empty() && g.polarity.size() != q.size())
                throw fault(FaultKind::Arity, "polarity pattern length differs from control count");
            for (std::size_t i = 0; i < q.size(); ++i) {
                ctl_q_.push_back(q[i]);
                ctl_p_.push_back(g.polarity.empty() ? 1 : g.polarity[i]);
                ++pushed;
            }
        }
        if (auto g = std::get_if<GateApp>(&c.inner))
            apply_gate(*g, f);
        else
            do_call(std::get<CallApp>(c.inner), f);
        ctl_q_.resize(ctl_q_.size() - pushed);
        ctl_p_.resize(ctl_p_.size() - pushed);
    }

    void exec_node(const MeasureInto& m, Frame& f) {
        if (!ctl_q_.empty()) throw fault(FaultKind::Variant, "measurement inside a controlled context");
        std::vector<int> q;
        for (const auto& r : m.qubits) q.push_back(qubit(r, f));
        std::vector<int> bits;
        try {
            bits = st_.measure(q, rng_);
        } catch (const SimError& e) {
            throw fault(FaultKind::Qubit, e.what());
        }
        f.vars[m.var] = static_cast<std::int64_t>(bits_to_value(bits));
        if (log_) log_->push_back({sub_name_ + ":" + format_path(path_), std::move(bits)});
    }

    void exec_node(const IfStmt& s, Frame& f) {
        if (eval_bool(s.cond, f))
            run_nested(s.then_body, f, "then");
        else
            run_nested(s.else_body, f, "else");
    }

    void exec_node(const ForStmt& s, Frame& f) {
        std::int64_t lo = eval_int(s.lo, f, "loop bound");
        std::int64_t hi = eval_int(s.hi, f, "loop bound");
        auto saved = f.vars.find(s.var) == f.vars.end() ? std::optional<Value>{} : std::optional<Value>{f.vars[s.var]};
        path_.back().first = "body";
        path_.emplace_back(nullptr, 0);
        if (!s.descending) {
            for (std::int64_t i = lo; i <= hi; ++i) {
                f.vars[s.var] = i;
                run(s.body, f);
            }
        } else {
            for (std::int64_t i = hi; i >= lo; --i) {
                f.vars[s.var] = i;
                run(s.body, f);
            }
        }
        path_.pop_back();
        if (saved)
            f.vars[s.var] = *saved;
        else
            f.vars.erase(s.var);
    }

    void exec_node(const RepeatUntil& s, Frame& f) {
        for (int it = 0;; ++it) {
            if (it >= s.max_iterations)
                throw fault(FaultKind::Divergence,
                            "repeat-until exceeded " + std::to_string(s.max_iterations) + " iterations");
            run_nested(s.body, f, "body");
            if (eval_bool(s.until, f)) return;
        }
    }

    void exec_node(const WithinApply& s, Frame& f) {
        run_nested(s.within, f, "within");
        run_nested(s.apply, f, "apply");
        auto it = inv_blocks_.find(&s.within);
        if (it == inv_blocks_.end()) {
            try {
                it = inv_blocks_.emplace(&s.within, inverse_block(s.within)).first;
            } catch (const VariantError& e) {
                throw fault(FaultKind::Variant, e.what());
            }
        }
        run_nested(it->second, f, "within");
    }

    void exec_node(const Assign& a, Frame& f) { f.vars[a.var] = eval(a.value, f); }

public:
    std::string sub_name_;
    std::vector<std::pair<const char*, int>> path_{{nullptr, 0}};

private:
    const Library& lib_;
    StateVector& st_;
    Rng& rng_;
    std::vector<MeasurementRecord>* log_;
    ExecOptions opts_;
    int depth_ = 0;
    std::vector<int> ctl_q_, ctl_p_;
    std::unordered_map<const Subroutine*, SubPtr> adj_cache_;
    std::vector<SubPtr> keep_;
    std::unordered_map<const Block*, Block> inv_blocks_;
};

}  // namespace

std::map<std::string, Value> run_in_place(const Library& lib, const Subroutine& sub, const std::vector<Argument>& args,
                                          StateVector& state, Rng& rng, std::vector<MeasurementRecord>* log,
                                          const ExecOptions& opts) {
    Machine m(lib, state, rng, log, opts);
    m.sub_name_ = sub.name;
    return m.invoke(sub, args);
}

ExecutionResult execute(const Library& lib, const Subroutine& sub, const std::vector<Argument>& args, StateVector state,
                        Rng& rng, const ExecOptions& opts) {
    ExecutionResult r;
    r.classical_outputs = run_in_place(lib, sub, args, state, rng, &r.measurement_log, opts);
    r.final_state = std::move(state);
    return r;
}

std::map<std::string, std::int64_t> param_lengths(const Subroutine& sub, const std::map<std::string, Value>& classical) {
    MapEnv env;
    for (const auto& [k, v] : classical) env.vars[k] = v;
    std::map<std::string, std::int64_t> out;
    for (const auto& p : sub.params) {
        if (p.kind != ParamKind::Qubits || p.length.empty()) continue;
        out[p.name] = as_int(evaluate(p.length, env), "register length");
    }
    return out;
}

}  // namespace qtk
