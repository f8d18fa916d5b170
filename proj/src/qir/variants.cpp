#include "qtk/qir/variants.hpp"

#include <functional>
#include <set>

namespace qtk {

namespace {

using VarSet = std::set<std::string>;

bool is_quantum(const Stmt& s);

bool block_is_quantum(const Block& b) {
    for (const auto& s : b)
        if (is_quantum(s)) return true;
    return false;
}

bool is_quantum(const Stmt& s) {
    if (auto i = std::get_if<IfStmt>(&s.node)) return block_is_quantum(i->then_body) || block_is_quantum(i->else_body);
    if (auto f = std::get_if<ForStmt>(&s.node)) return block_is_quantum(f->body);
    return !std::holds_alternative<Assign>(s.node);
}

void reads_qarg(const QArg& q, VarSet& out) {
    out.insert(q.reg);
    if (!q.start.empty()) q.start.collect_vars(out);
    if (!q.length.empty()) q.length.collect_vars(out);
}

void reads_of(const Block& b, VarSet& out);

void reads_of(const Stmt& s, VarSet& out) {
    auto gate_reads = [&](const GateApp& g) {
        if (!g.angle.empty()) g.angle.collect_vars(out);
        for (const auto& t : g.targets) t.index.collect_vars(out);
    };
    auto call_reads = [&](const CallApp& c) {
        for (const auto& a : c.args) {
            if (a.kind == ArgExpr::Kind::Classical) a.value.collect_vars(out);
            if (a.kind == ArgExpr::Kind::Qubits) reads_qarg(a.qubits, out);
        }
    };
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateApp>) {
                gate_reads(n);
            } else if constexpr (std::is_same_v<T, CallApp>) {
                call_reads(n);
            } else if constexpr (std::is_same_v<T, ControlledApp>) {
                for (const auto& g : n.controls) reads_qarg(g.qubits, out);
                if (auto g = std::get_if<GateApp>(&n.inner))
                    gate_reads(*g);
                else
                    call_reads(std::get<CallApp>(n.inner));
            } else if constexpr (std::is_same_v<T, MeasureInto>) {
                for (const auto& t : n.qubits) t.index.collect_vars(out);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                n.cond.collect_vars(out);
                reads_of(n.then_body, out);
                reads_of(n.else_body, out);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                n.lo.collect_vars(out);
                n.hi.collect_vars(out);
                reads_of(n.body, out);
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                reads_of(n.body, out);
                n.until.collect_vars(out);
            } else if constexpr (std::is_same_v<T, WithinApply>) {
                reads_of(n.within, out);
                reads_of(n.apply, out);
            } else if constexpr (std::is_same_v<T, Assign>) {
                n.value.collect_vars(out);
            }
        },
        s.node);
}

void reads_of(const Block& b, VarSet& out) {
    for (const auto& s : b) reads_of(s, out);
}

void writes_of(const Block& b, VarSet& out);

void writes_of(const Stmt& s, VarSet& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CallApp>) {
                out.insert(n.bind.begin(), n.bind.end());
            } else if constexpr (std::is_same_v<T, ControlledApp>) {
                if (auto c = std::get_if<CallApp>(&n.inner)) out.insert(c->bind.begin(), c->bind.end());
            } else if constexpr (std::is_same_v<T, MeasureInto>) {
                out.insert(n.var);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                writes_of(n.then_body, out);
                writes_of(n.else_body, out);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                VarSet inner;
                writes_of(n.body, inner);
                inner.erase(n.var);
                out.insert(inner.begin(), inner.end());
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                writes_of(n.body, out);
            } else if constexpr (std::is_same_v<T, WithinApply>) {
                writes_of(n.within, out);
                writes_of(n.apply, out);
            } else if constexpr (std::is_same_v<T, Assign>) {
                out.insert(n.var);
            }
        },
        s.node);
}

void writes_of(const Block& b, VarSet& out) {
    for (const auto& s : b) writes_of(s, out);
}

struct AdjChecker {
    const Library& lib;
    std::set<std::string> visiting;

    bool sub_ok(const Subroutine& s) {
        if (!visiting.insert(s.name).second) return true;
        bool ok = block_ok(s.body);
        visiting.erase(s.name);
        return ok;
    }

    bool call_ok(const CallApp& c) {
        if (!c.bind.empty()) return false;
        if (auto callee = lib.find(c.callee)) return sub_ok(*callee);
        return true;
    }

    bool stmt_ok(const Stmt& s) {
        return std::visit(
            [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, MeasureInto> || std::is_same_v<T, RepeatUntil>) {
                    return false;
                } else if constexpr (std::is_same_v<T, CallApp>) {
                    return call_ok(n);
                } else if constexpr (std::is_same_v<T, ControlledApp>) {
                    if (auto c = std::get_if<CallApp>(&n.inner)) return call_ok(*c);
                    return true;
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    return block_ok(n.then_body) && block_ok(n.else_body);
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    return block_ok(n.body);
                } else if constexpr (std::is_same_v<T, WithinApply>) {
                    return block_ok(n.within) && block_ok(n.apply);
                } else {
                    return true;
                }
            },
            s.node);
    }

    bool block_ok(const Block& b) {
        for (const auto& s : b)
            if (!stmt_ok(s)) return false;
        // Classical statements run before every quantum statement once the
        // block is inverted, so they must not overwrite anything a quantum
        // statement of this block reads earlier in source order.
        VarSet quantum_reads;
        for (const auto& s : b) {
            if (is_quantum(s)) {
                reads_of(s, quantum_reads);
            } else {
                VarSet w;
                writes_of(s, w);
                for (const auto& v : w)
                    if (quantum_reads.count(v)) return false;
            }
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!is_quantum(b[i])) continue;
            VarSet w;
            writes_of(b[i], w);
            if (w.empty()) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (j == i) continue;
                VarSet r;
                reads_of(b[j], r);
                for (const auto& v : w)
                    if (r.count(v)) return false;
            }
        }
        return true;
    }
};

Expr negate(const Expr& e) {
    if (!e.empty() && e.op() == Op::Neg) return e.args()[0];
    return -e;
}

GateApp invert_gate(GateApp g) {
    switch (g.gate) {
        case GateKind::S: g.gate = GateKind::Sdg; break;
        case GateKind::Sdg: g.gate = GateKind::S; break;
        case GateKind::T: g.gate = GateKind::Tdg; break;
        case GateKind::Tdg: g.gate = GateKind::T; break;
        default:
            if (gate_has_angle(g.gate)) g.angle = negate(g.angle);
            break;
    }
    return g;
}

CallApp invert_call(CallApp c) {
    if (!c.bind.empty()) throw VariantError("cannot invert call to '" + c.callee + "' that returns values");
    c.adjoint = !c.adjoint;
    return c;
}

Stmt invert_stmt(const Stmt& s) {
    return std::visit(
        [&](const auto& n) -> Stmt {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateApp>) {
                return Stmt{invert_gate(n)};
            } else if constexpr (std::is_same_v<T, CallApp>) {
                return Stmt{invert_call(n)};
            } else if constexpr (std::is_same_v<T, ControlledApp>) {
                ControlledApp c = n;
                if (auto g = std::get_if<GateApp>(&c.inner))
                    c.inner = invert_gate(*g);
                else
                    c.inner = invert_call(std::get<CallApp>(c.inner));
                return Stmt{std::move(c)};
            } else if constexpr (std::is_same_v<T, MeasureInto>) {
                throw VariantError("cannot invert a measurement");
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                throw VariantError("cannot invert a repeat-until loop");
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                return Stmt{IfStmt{n.cond, inverse_block(n.then_body), inverse_block(n.else_body)}};
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                return Stmt{ForStmt{n.var, n.lo, n.hi, !n.descending, inverse_block(n.body)}};
            } else if constexpr (std::is_same_v<T, WithinApply>) {
                return Stmt{WithinApply{n.within, inverse_block(n.apply)}};
            } else {
                return s;
            }
        },
        s.node);
}

std::string fresh_name(const Subroutine& sub, const std::string& base) {
    VarSet used;
    for (const auto& p : sub.params) used.insert(p.name);
    reads_of(sub.body, used);
    writes_of(sub.body, used);
    if (!used.count(base)) return base;
    for (int i = 1;; ++i) {
        auto cand = base + "_" + std::to_string(i);
        if (!used.count(cand)) return cand;
    }
}

Block lift_block(const Block& b, const ControlGroup& ctl);

Stmt lift_stmt(const Stmt& s, const ControlGroup& ctl) {
    return std::visit(
        [&](const auto& n) -> Stmt {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateApp>) {
                return Stmt{ControlledApp{{ctl}, n}};
            } else if constexpr (std::is_same_v<T, CallApp>) {
                return Stmt{ControlledApp{{ctl}, n}};
            } else if constexpr (std::is_same_v<T, ControlledApp>) {
                ControlledApp c = n;
                c.controls.insert(c.controls.begin(), ctl);
                return Stmt{std::move(c)};
            } else if constexpr (std::is_same_v<T, MeasureInto>) {
                throw VariantError("cannot control a measurement");
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                return Stmt{IfStmt{n.cond, lift_block(n.then_body, ctl), lift_block(n.else_body, ctl)}};
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                return Stmt{ForStmt{n.var, n.lo, n.hi, n.descending, lift_block(n.body, ctl)}};
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                return Stmt{RepeatUntil{lift_block(n.body, ctl), n.until, n.max_iterations}};
            } else if constexpr (std::is_same_v<T, WithinApply>) {
                return Stmt{WithinApply{n.within, lift_block(n.apply, ctl)}};
            } else {
                return s;
            }
        },
        s.node);
}

Block lift_block(const Block& b, const ControlGroup& ctl) {
    Block out;
    out.reserve(b.size());
    for (const auto& s : b) out.push_back(lift_stmt(s, ctl));
    return out;
}

Block substitute_block(const Block& b, Subroutine& sub, std::map<std::string, int>& counts);

void substitute_into(const Stmt& s, Block& out, Subroutine& sub, std::map<std::string, int>& counts) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, MeasureInto>) {
                int k = ++counts[n.var];
                std::string pname = "set_" + n.var + (k > 1 ? "_" + std::to_string(k) : std::string());
                sub.params.push_back(ir::int_param(pname));
                out.push_back(ir::assign(n.var, ir::V(pname)));
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                Block t = substitute_block(n.then_body, sub, counts);
                Block e = substitute_block(n.else_body, sub, counts);
                out.push_back(Stmt{IfStmt{n.cond, std::move(t), std::move(e)}});
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                out.push_back(Stmt{ForStmt{n.var, n.lo, n.hi, n.descending, substitute_block(n.body, sub, counts)}});
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                out.push_back(Stmt{RepeatUntil{substitute_block(n.body, sub, counts), n.until, n.max_iterations}});
            } else if constexpr (std::is_same_v<T, WithinApply>) {
                for (auto& x : substitute_block(n.within, sub, counts)) out.push_back(std::move(x));
                for (auto& x : substitute_block(n.apply, sub, counts)) out.push_back(std::move(x));
            } else if constexpr (std::is_same_v<T, Assign>) {
                out.push_back(s);
            }
        },
        s.node);
}

Block substitute_block(const Block& b, Subroutine& sub, std::map<std::string, int>& counts) {
    Block out;
    for (const auto& s : b) substitute_into(s, out, sub, counts);
    return out;
}

std::optional<std::string> find_in_block(const Block& b, const Library& lib, const std::string& owner,
                                         std::vector<std::pair<const char*, int>>& path, std::set<std::string>& seen);

std::optional<std::string> find_in_sub(const Subroutine& s, const Library& lib, std::set<std::string>& seen) {
    if (!seen.insert(s.name).second) return std::nullopt;
    std::vector<std::pair<const char*, int>> path;
    return find_in_block(s.body, lib, s.name, path, seen);
}

std::optional<std::string> find_in_block(const Block& b, const Library& lib, const std::string& owner,
                                         std::vector<std::pair<const char*, int>>& path, std::set<std::string>& seen) {
    path.emplace_back(nullptr, 0);
    std::optional<std::string> found;
    auto nested = [&](const Block& inner, const char* tag) {
        if (found) return;
        path.back().first = tag;
        found = find_in_block(inner, lib, owner, path, seen);
        path.back().first = nullptr;
    };
    auto via_call = [&](const CallApp& c) {
        if (found) return;
        if (auto callee = lib.find(c.callee)) found = find_in_sub(*callee, lib, seen);
    };
    for (std::size_t i = 0; i < b.size() && !found; ++i) {
        path.back() = {nullptr, static_cast<int>(i)};
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, MeasureInto>) {
                    found = owner + ":" + format_path(path);
                } else if constexpr (std::is_same_v<T, CallApp>) {
                    via_call(n);
                } else if constexpr (std::is_same_v<T, ControlledApp>) {
                    if (auto c = std::get_if<CallApp>(&n.inner)) via_call(*c);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    nested(n.then_body, "then");
                    nested(n.else_body, "else");
                } else if constexpr (std::is_same_v<T, ForStmt> || std::is_same_v<T, RepeatUntil>) {
                    nested(n.body, "body");
                } else if constexpr (std::is_same_v<T, WithinApply>) {
                    nested(n.within, "within");
                    nested(n.apply, "apply");
                }
            },
            b[i].node);
    }
    path.pop_back();
    return found;
}

}  // namespace

std::string format_path(const std::vector<std::pair<const char*, int>>& path) {
    std::string out;
    for (const auto& [tag, idx] : path) {
        out += std::to_string(idx);
        if (tag) {
            out += '.';
            out += tag;
            out += '.';
        }
    }
    return out;
}

bool block_adjointable(const Block& block, const Library& lib) {
    AdjChecker c{lib, {}};
    return c.block_ok(block);
}

bool is_adjointable(const Subroutine& sub, const Library& lib) {
    AdjChecker c{lib, {}};
    return c.sub_ok(sub);
}

Block inverse_block(const Block& block) {
    Block out;
    out.reserve(block.size());
    for (const auto& s : block)
        if (!is_quantum(s)) out.push_back(s);
    for (auto it = block.rbegin(); it != block.rend(); ++it)
        if (is_quantum(*it)) out.push_back(invert_stmt(*it));
    return out;
}

Subroutine inverse_of(const Subroutine& sub, const Library& lib) {
    if (!is_adjointable(sub, lib)) throw VariantError("subroutine '" + sub.name + "' is not adjointable");
    Subroutine out = sub;
    static const std::string suffix = "$adj";
    if (out.name.size() > suffix.size() && out.name.ends_with(suffix))
        out.name.resize(out.name.size() - suffix.size());
    else
        out.name += suffix;
    out.body = inverse_block(sub.body);
    return out;
}

Subroutine controlled_of(const Subroutine& sub, const Library&) {
    Subroutine out = sub;
    out.name += "$ctl";
    std::string ctl = fresh_name(sub, "ctl");
    out.params.insert(out.params.begin(), ir::qubits_param(ctl));
    out.body = lift_block(sub.body, ir::controls(ir::whole(ctl)));
    return out;
}

Subroutine power_of(const Subroutine& sub, int k, const Library& lib) {
    Subroutine out = sub;
    out.name += "$pow" + std::to_string(k);
    out.body.clear();
    if (k == 0) return out;
    Block body = sub.body;
    if (k < 0) {
        if (!is_adjointable(sub, lib)) throw VariantError("subroutine '" + sub.name + "' is not adjointable");
        body = inverse_block(sub.body);
    }
    std::string var = fresh_name(sub, "_pw");
    int reps = k < 0 ? -k : k;
    out.body.push_back(ir::for_(var, 0, reps - 1, std::move(body)));
    return out;
}

Subroutine reindex_endian(const Subroutine& sub, const std::string& param, EndianSide side) {
    const Param* p = sub.param(param);
    if (!p || p->kind != ParamKind::Qubits) throw VariantError("'" + param + "' is not a qubit parameter of " + sub.name);
    using namespace ir;
    std::string i = fresh_name(sub, "_ri");
    Expr n = fn("len", {V(param)});
    Stmt flip = for_(i, 0, n / 2 - 1, {gate(GateKind::SWAP, {at(param, V(i)), at(param, n - 1 - V(i))})});
    Subroutine out = sub;
    out.name += "$rev";
    out.body.clear();
    if (side != EndianSide::Output) out.body.push_back(flip);
    out.body.insert(out.body.end(), sub.body.begin(), sub.body.end());
    if (side != EndianSide::Input) out.body.push_back(flip);
    return out;
}

Subroutine classical_substitute(const Subroutine& sub) {
    Subroutine out = sub;
    out.name += "$cls";
    std::map<std::string, int> counts;
    out.body = substitute_block(sub.body, out, counts);
    return out;
}

std::optional<std::string> find_measurement(const Subroutine& sub, const Library& lib) {
    std::set<std::string> seen;
    return find_in_sub(sub, lib, seen);
}

}  // namespace qtk
