#include "qtk/mutator/mutator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qtk/qir/serialize.hpp"
#include "qtk/qir/validate.hpp"
#include "qtk/qir/variants.hpp"

namespace qtk {

namespace {

using Prefix = std::vector<std::pair<const char*, int>>;

struct Loc {
    Prefix prefix;  // block holding the statement
    int index = 0;
    std::string path() const {
        Prefix p = prefix;
        p.emplace_back(nullptr, index);
        return format_path(p);
    }
};

Block* child(Stmt& s, const char* tag) {
    std::string t = tag;
    if (auto i = std::get_if<IfStmt>(&s.node)) return t == "then" ? &i->then_body : &i->else_body;
    if (auto f = std::get_if<ForStmt>(&s.node)) return &f->body;
    if (auto r = std::get_if<RepeatUntil>(&s.node)) return &r->body;
    if (auto w = std::get_if<WithinApply>(&s.node)) return t == "within" ? &w->within : &w->apply;
    throw std::logic_error("statement has no nested block");
}

Block& resolve(Subroutine& sub, const Prefix& prefix) {
    Block* b = &sub.body;
    for (const auto& [tag, idx] : prefix) b = child((*b)[static_cast<std::size_t>(idx)], tag);
    return *b;
}

struct BlockInfo {
    Prefix prefix;
    const Block* block;
    bool is_else;
};

void collect_blocks(const Block& b, Prefix prefix, bool is_else, std::vector<BlockInfo>& out) {
    out.push_back({prefix, &b, is_else});
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto sub = [&](const Block& inner, const char* tag) {
            Prefix p = prefix;
            p.emplace_back(tag, static_cast<int>(i));
            collect_blocks(inner, p, std::string(tag) == "else", out);
        };
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IfStmt>) {
                    sub(n.then_body, "then");
                    sub(n.else_body, "else");
                } else if constexpr (std::is_same_v<T, ForStmt> || std::is_same_v<T, RepeatUntil>) {
                    sub(n.body, "body");
                } else if constexpr (std::is_same_v<T, WithinApply>) {
                    sub(n.within, "within");
                    sub(n.apply, "apply");
                }
            },
            b[i].node);
    }
}

struct Located {
    Loc loc;
    const Stmt* stmt;
    bool sole_else;  // the only statement of an else block
};

std::vector<Located> all_statements(const std::vector<BlockInfo>& blocks) {
    std::vector<Located> out;
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.block->size(); ++i)
            out.push_back({{b.prefix, static_cast<int>(i)}, &(*b.block)[i], b.is_else && b.block->size() == 1});
    return out;
}

// Insertion points: every position of every block, except empty else blocks.
std::vector<Loc> insertion_points(const std::vector<BlockInfo>& blocks) {
    std::vector<Loc> out;
    for (const auto& b : blocks) {
        if (b.is_else && b.block->empty()) continue;
        for (std::size_t i = 0; i <= b.block->size(); ++i) out.push_back({b.prefix, static_cast<int>(i)});
    }
    return out;
}

// ---------------------------------------------------------------- expressions

Expr rebuild(const Expr& e, std::vector<Expr> args) {
    Op op = e.op();
    if (op == Op::Call) return Expr::call(e.name(), std::move(args));
    if (op == Op::Neg || op == Op::Not) return Expr::unary(op, args[0]);
    return Expr::binary(op, args[0], args[1]);
}

bool is_leaf(const Expr& e) { return e.op() == Op::Int || e.op() == Op::Float || e.op() == Op::Bool || e.op() == Op::Var; }

int count_if_nodes(const Expr& e, const std::function<bool(const Expr&)>& pred) {
    if (e.empty()) return 0;
    int c = pred(e) ? 1 : 0;
    if (!is_leaf(e))
        for (const auto& a : e.args()) c += count_if_nodes(a, pred);
    return c;
}

// Replaces the k-th node (pre-order) satisfying `pred` with f(node).
Expr replace_nth(const Expr& e, const std::function<bool(const Expr&)>& pred, int& k,
                 const std::function<Expr(const Expr&)>& f) {
    if (e.empty()) return e;
    if (pred(e)) {
        if (k == 0) {
            --k;
            return f(e);
        }
        --k;
    }
    if (is_leaf(e)) return e;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : e.args()) {
        args.push_back(replace_nth(a, pred, k, f));
        changed = changed || !args.back().same(a);
    }
    return changed ? rebuild(e, std::move(args)) : e;
}

bool int_literal(const Expr& e) { return e.op() == Op::Int; }

// e + delta with literal folding, so `n - 1` becomes `n - 2`.
Expr shift_expr(const Expr& e, std::int64_t delta) {
    if (e.op() == Op::Int) return Expr(std::get<std::int64_t>(e.literal()) + delta);
    if ((e.op() == Op::Add || e.op() == Op::Sub) && e.args()[1].op() == Op::Int) {
        std::int64_t c = std::get<std::int64_t>(e.args()[1].literal());
        c = e.op() == Op::Add ? c + delta : c - delta;
        if (c == 0) return e.args()[0];
        if (c < 0) return Expr::binary(e.op() == Op::Add ? Op::Sub : Op::Add, e.args()[0], Expr(-c));
        return Expr::binary(e.op(), e.args()[0], Expr(c));
    }
    if (delta < 0) return e - Expr(-delta);
    return e + Expr(delta);
}

Op negated(Op op) {
    switch (op) {
        case Op::Eq: return Op::Ne;
        case Op::Ne: return Op::Eq;
        case Op::Lt: return Op::Ge;
        case Op::Ge: return Op::Lt;
        case Op::Gt: return Op::Le;
        case Op::Le: return Op::Gt;
        default: return op;
    }
}

// Header expressions of a statement (nested bodies excluded).
std::vector<Expr*> exprs_of(Stmt& s) {
    std::vector<Expr*> out;
    auto gate = [&](GateApp& g) {
        if (!g.angle.empty()) out.push_back(&g.angle);
        for (auto& t : g.targets) out.push_back(&t.index);
    };
    auto qa = [&](QArg& q) {
        if (q.kind != QArg::Kind::Whole) out.push_back(&q.start);
        if (q.kind == QArg::Kind::Slice) out.push_back(&q.length);
    };
    auto call = [&](CallApp& c) {
        for (auto& a : c.args) {
            if (a.kind == ArgExpr::Kind::Classical) out.push_back(&a.value);
            if (a.kind == ArgExpr::Kind::Qubits) qa(a.qubits);
        }
    };
    std::visit(
        [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GateApp>) {
                gate(n);
            } else if constexpr (std::is_same_v<T, CallApp>) {
                call(n);
            } else if constexpr (std::is_same_v<T, ControlledApp>) {
                for (auto& g : n.controls) qa(g.qubits);
                if (auto g = std::get_if<GateApp>(&n.inner))
                    gate(*g);
                else
                    call(std::get<CallApp>(n.inner));
            } else if constexpr (std::is_same_v<T, MeasureInto>) {
                for (auto& q : n.qubits) out.push_back(&q.index);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                out.push_back(&n.cond);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                out.push_back(&n.lo);
                out.push_back(&n.hi);
            } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                out.push_back(&n.until);
            } else if constexpr (std::is_same_v<T, Assign>) {
                out.push_back(&n.value);
            }
        },
        s.node);
    return out;
}

// ---------------------------------------------------------------- qubit pool

void refs_in(const Block& b, std::vector<QubitRef>& out) {
    auto qa = [&](const QArg& q) {
        if (q.kind == QArg::Kind::Elem) out.push_back({q.reg, q.start});
    };
    auto call = [&](const CallApp& c) {
        for (const auto& a : c.args)
            if (a.kind == ArgExpr::Kind::Qubits) qa(a.qubits);
    };
    for (const auto& s : b)
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, GateApp>) {
                    out.insert(out.end(), n.targets.begin(), n.targets.end());
                } else if constexpr (std::is_same_v<T, CallApp>) {
                    call(n);
                } else if constexpr (std::is_same_v<T, ControlledApp>) {
                    for (const auto& g : n.controls) qa(g.qubits);
                    if (auto g = std::get_if<GateApp>(&n.inner))
                        out.insert(out.end(), g->targets.begin(), g->targets.end());
                    else
                        call(std::get<CallApp>(n.inner));
                } else if constexpr (std::is_same_v<T, MeasureInto>) {
                    out.insert(out.end(), n.qubits.begin(), n.qubits.end());
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    refs_in(n.then_body, out);
                    refs_in(n.else_body, out);
                } else if constexpr (std::is_same_v<T, ForStmt> || std::is_same_v<T, RepeatUntil>) {
                    refs_in(n.body, out);
                } else if constexpr (std::is_same_v<T, WithinApply>) {
                    refs_in(n.within, out);
                    refs_in(n.apply, out);
                }
            },
            s.node);
}

std::string ref_key(const QubitRef& r) { return r.reg + "[" + r.index.str() + "]"; }

// Refs used anywhere in the subroutine plus reg[0] of every register;
// out-of-scope picks are dropped later by validation.
std::vector<QubitRef> qubit_pool(const Subroutine& sub) {
    std::vector<QubitRef> raw;
    for (const auto& p : sub.params)
        if (p.kind == ParamKind::Qubits) raw.push_back({p.name, Expr(0)});
    refs_in(sub.body, raw);
    std::vector<QubitRef> out;
    std::set<std::string> seen;
    for (auto& r : raw)
        if (seen.insert(ref_key(r)).second) out.push_back(std::move(r));
    return out;
}

std::optional<std::vector<QubitRef>> pick_refs(const std::vector<QubitRef>& pool, int k, Rng& rng) {
    if (static_cast<int>(pool.size()) < k) return std::nullopt;
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<QubitRef> out;
    for (int i = 0; i < k; ++i) {
        std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(pool[idx[i]]);
    }
    return out;
}

const std::vector<double>& angle_pool() {
    static const std::vector<double> a{std::numbers::pi, std::numbers::pi / 2, std::numbers::pi / 4};
    return a;
}

std::vector<GateKind> same_arity(GateKind g) {
    std::vector<GateKind> out;
    for (GateKind k : all_gate_kinds())
        if (k != g && gate_arity(k) == gate_arity(g)) out.push_back(k);
    return out;
}

GateApp regate(const GateApp& g, GateKind k, Rng& rng) {
    GateApp out = g;
    out.gate = k;
    if (!gate_has_angle(k))
        out.angle = Expr();
    else if (g.angle.empty())
        out.angle = Expr(angle_pool()[rng.below(angle_pool().size())]);
    return out;
}

// ---------------------------------------------------------------- slots

struct Slot {
    EditKind edit;
    Loc loc;
    bool erase = false;
    std::string removed;  // record of the statement being removed
    std::function<std::optional<Stmt>(Rng&)> gen;
    int failures = 0;
};

struct Context {
    const Subroutine& sub;
    const Library& lib;
    std::vector<BlockInfo> blocks;
    std::vector<Located> stmts;
    std::vector<Loc> inserts;
    std::vector<QubitRef> pool;
};

void gm_slots(const Context& cx, std::vector<Slot>& out) {
    for (const auto& loc : cx.inserts) {
        const auto* pool = &cx.pool;
        out.push_back({EditKind::Add, loc, false, {}, [pool](Rng& rng) -> std::optional<Stmt> {
                           const auto& kinds = all_gate_kinds();
                           GateKind k = kinds[rng.below(kinds.size())];
                           auto refs = pick_refs(*pool, gate_arity(k), rng);
                           if (!refs) return std::nullopt;
                           if (gate_has_angle(k))
                               return ir::gate(k, Expr(angle_pool()[rng.below(angle_pool().size())]), *refs);
                           return ir::gate(k, *refs);
                       }});
    }
    for (const auto& s : cx.stmts) {
        const GateApp* g = std::get_if<GateApp>(&s.stmt->node);
        const ControlledApp* c = std::get_if<ControlledApp>(&s.stmt->node);
        if (c) g = std::get_if<GateApp>(&c->inner);
        if (!g) continue;
        if (!s.sole_else) out.push_back({EditKind::Remove, s.loc, true, stmt_record(*s.stmt), nullptr});
        Stmt orig = *s.stmt;
        out.push_back({EditKind::Replace, s.loc, false, {}, [orig](Rng& rng) -> std::optional<Stmt> {
                           Stmt st = orig;
                           GateApp* t = std::get_if<GateApp>(&st.node);
                           if (!t) t = &std::get<GateApp>(std::get<ControlledApp>(st.node).inner);
                           auto alts = same_arity(t->gate);
                           if (alts.empty()) return std::nullopt;
                           *t = regate(*t, alts[rng.below(alts.size())], rng);
                           return st;
                       }});
    }
}

bool compatible(const Subroutine& a, const Subroutine& b) {
    if (a.params.size() != b.params.size() || a.returns.size() != b.returns.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].kind != b.params[i].kind) return false;
    return true;
}

void sm_slots(const Context& cx, std::vector<Slot>& out) {
    for (const auto& s : cx.stmts) {
        const CallApp* c = std::get_if<CallApp>(&s.stmt->node);
        if (auto ca = std::get_if<ControlledApp>(&s.stmt->node)) c = std::get_if<CallApp>(&ca->inner);
        if (!c) continue;
        Stmt orig = *s.stmt;
        out.push_back({EditKind::Add, {s.loc.prefix, s.loc.index + 1}, false, {},
                       [orig](Rng&) -> std::optional<Stmt> { return orig; }});
        if (!s.sole_else) out.push_back({EditKind::Remove, s.loc, true, stmt_record(orig), nullptr});

        std::vector<std::string> alts;
        if (auto callee = cx.lib.find(c->callee)) {
            for (const auto& b : cx.lib.buggy_variants(c->callee)) alts.push_back(b);
            for (const auto& name : cx.lib.names()) {
                if (name == c->callee || name == cx.sub.name) continue;
                if (std::find(alts.begin(), alts.end(), name) != alts.end()) continue;
                if (compatible(*callee, *cx.lib.get(name))) alts.push_back(name);
            }
        } else if (const Param* h = cx.sub.param(c->callee); h && h->kind == ParamKind::Handle) {
            for (const auto& p : cx.sub.params)
                if (p.kind == ParamKind::Handle && p.name != h->name && p.signature == h->signature)
                    alts.push_back(p.name);
        }
        out.push_back({EditKind::Replace, s.loc, false, {}, [orig, alts](Rng& rng) -> std::optional<Stmt> {
                           Stmt st = orig;
                           CallApp* t = std::get_if<CallApp>(&st.node);
                           if (!t) t = &std::get<CallApp>(std::get<ControlledApp>(st.node).inner);
                           // the last choice flips the adjoint flag
                           std::size_t pick = rng.below(alts.size() + 1);
                           if (pick == alts.size())
                               t->adjoint = !t->adjoint;
                           else
                               t->callee = alts[pick];
                           return st;
                       }});
    }
}

void cm_slots(const Context& cx, std::vector<Slot>& out) {
    for (const auto& s : cx.stmts) {
        Stmt orig = *s.stmt;
        if (std::holds_alternative<ForStmt>(orig.node)) {
            out.push_back({EditKind::Replace, s.loc, false, {}, [orig](Rng& rng) -> std::optional<Stmt> {
                               Stmt st = orig;
                               auto& f = std::get<ForStmt>(st.node);
                               Expr& e = rng.below(2) ? f.hi : f.lo;
                               e = shift_expr(e, rng.below(2) ? 1 : -1);
                               return st;
                           }});
        }
        Stmt probe = orig;
        int lits = 0, cmps = 0;
        for (Expr* e : exprs_of(probe)) {
            lits += count_if_nodes(*e, int_literal);
            cmps += count_if_nodes(*e, [](const Expr& x) { return is_comparison(x.op()); });
        }
        if (lits > 0) {
            out.push_back({EditKind::Replace, s.loc, false, {}, [orig, lits](Rng& rng) -> std::optional<Stmt> {
                               Stmt st = orig;
                               int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(lits)));
                               std::int64_t delta = rng.below(2) ? 1 : -1;
                               for (Expr* e : exprs_of(st)) {
                                   if (k < 0) break;
                                   *e = replace_nth(*e, int_literal, k, [delta](const Expr& x) {
                                       return Expr(std::get<std::int64_t>(x.literal()) + delta);
                                   });
                               }
                               return st;
                           }});
        }
        if (cmps > 0) {
            out.push_back({EditKind::Replace, s.loc, false, {}, [orig, cmps](Rng& rng) -> std::optional<Stmt> {
                               Stmt st = orig;
                               int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(cmps)));
                               auto pred = [](const Expr& x) { return is_comparison(x.op()); };
                               for (Expr* e : exprs_of(st)) {
                                   if (k < 0) break;
                                   *e = replace_nth(*e, pred, k, [](const Expr& x) {
                                       return Expr::binary(negated(x.op()), x.args()[0], x.args()[1]);
                                   });
                               }
                               return st;
                           }});
        }
        // index swap: two targets of one gate, or a single control with the first target
        const GateApp* g = std::get_if<GateApp>(&orig.node);
        const ControlledApp* c = std::get_if<ControlledApp>(&orig.node);
        bool swappable = g && g->targets.size() >= 2;
        if (c) {
            const GateApp* inner = std::get_if<GateApp>(&c->inner);
            swappable = inner && std::any_of(c->controls.begin(), c->controls.end(),
                                             [](const ControlGroup& cg) { return cg.qubits.kind == QArg::Kind::Elem; });
        }
        if (swappable) {
            out.push_back({EditKind::Replace, s.loc, false, {}, [orig](Rng& rng) -> std::optional<Stmt> {
                               Stmt st = orig;
                               if (auto t = std::get_if<GateApp>(&st.node)) {
                                   std::size_t i = rng.below(t->targets.size());
                                   std::size_t j = rng.below(t->targets.size() - 1);
                                   if (j >= i) ++j;
                                   std::swap(t->targets[i].index, t->targets[j].index);
                                   return st;
                               }
                               auto& ca = std::get<ControlledApp>(st.node);
                               auto& inner = std::get<GateApp>(ca.inner);
                               std::vector<ControlGroup*> elems;
                               for (auto& cg : ca.controls)
                                   if (cg.qubits.kind == QArg::Kind::Elem) elems.push_back(&cg);
                               ControlGroup* cg = elems[rng.below(elems.size())];
                               QubitRef& tgt = inner.targets[rng.below(inner.targets.size())];
                               if (cg->qubits.reg != tgt.reg) return std::nullopt;
                               std::swap(cg->qubits.start, tgt.index);
                               return st;
                           }});
        }
    }
}

std::string fresh_var(const Subroutine& sub) {
    std::set<std::string> used;
    for (const auto& p : sub.params) used.insert(p.name);
    std::function<void(const Block&)> scan = [&](const Block& b) {
        for (const auto& s : b)
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, MeasureInto> || std::is_same_v<T, Assign>) {
                        used.insert(n.var);
                    } else if constexpr (std::is_same_v<T, ForStmt>) {
                        used.insert(n.var);
                        scan(n.body);
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        scan(n.then_body);
                        scan(n.else_body);
                    } else if constexpr (std::is_same_v<T, RepeatUntil>) {
                        scan(n.body);
                    } else if constexpr (std::is_same_v<T, WithinApply>) {
                        scan(n.within);
                        scan(n.apply);
                    }
                },
                s.node);
    };
    scan(sub.body);
    for (int k = 0;; ++k)
        if (!used.count("_mm" + std::to_string(k))) return "_mm" + std::to_string(k);
}

void mm_slots(const Context& cx, std::vector<Slot>& out) {
    std::string var = fresh_var(cx.sub);
    for (const auto& loc : cx.inserts) {
        const auto* pool = &cx.pool;
        out.push_back({EditKind::Add, loc, false, {}, [pool, var](Rng& rng) -> std::optional<Stmt> {
                           auto refs = pick_refs(*pool, 1, rng);
                           if (!refs) return std::nullopt;
                           return ir::measure(var, *refs);
                       }});
    }
    for (const auto& s : cx.stmts) {
        auto m = std::get_if<MeasureInto>(&s.stmt->node);
        if (!m) continue;
        std::string v = m->var;
        out.push_back({EditKind::Remove, s.loc, false, stmt_record(*s.stmt),
                       [v](Rng&) -> std::optional<Stmt> { return ir::assign(v, Expr(0)); }});
    }
}

}  // namespace

std::string_view mutation_kind_name(MutationKind k) {
    switch (k) {
        case MutationKind::GM: return "GM";
        case MutationKind::SM: return "SM";
        case MutationKind::CM: return "CM";
        case MutationKind::MM: return "MM";
    }
    return "?";
}

MutationKind mutation_kind_from(std::string_view s) {
    for (MutationKind k : all_mutation_kinds())
        if (mutation_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown mutation kind '" + std::string(s) + "'");
}

std::string_view edit_kind_name(EditKind e) {
    switch (e) {
        case EditKind::Add: return "add";
        case EditKind::Remove: return "remove";
        case EditKind::Replace: return "replace";
    }
    return "?";
}

const std::vector<MutationKind>& all_mutation_kinds() {
    static const std::vector<MutationKind> k{MutationKind::GM, MutationKind::SM, MutationKind::CM, MutationKind::MM};
    return k;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string Mutant::manifest_line() const {
    return csv_field(base) + "," + std::string(mutation_kind_name(kind)) + "," + std::string(edit_kind_name(edit)) +
           "," + csv_field(site) + "," + csv_field(payload) + "," + std::to_string(seed);
}

std::string Mutant::id(std::size_t index) const {
    return base + "-" + std::string(mutation_kind_name(kind)) + "-" + std::to_string(index);
}

std::vector<Mutant> enumerate_mutants(const Subroutine& sub, const Library& lib, const std::set<MutationKind>& kinds,
                                      int limit_per_kind, Rng& rng) {
    Context cx{sub, lib, {}, {}, {}, qubit_pool(sub)};
    collect_blocks(sub.body, {}, false, cx.blocks);
    cx.stmts = all_statements(cx.blocks);
    cx.inserts = insertion_points(cx.blocks);
    const std::string base_text = to_text(sub);

    std::vector<Mutant> out;
    for (MutationKind kind : all_mutation_kinds()) {
        if (!kinds.count(kind)) continue;
        Rng krng = rng.split(static_cast<std::uint64_t>(kind) + 1);
        std::vector<Slot> slots;
        switch (kind) {
            case MutationKind::GM: gm_slots(cx, slots); break;
            case MutationKind::SM: sm_slots(cx, slots); break;
            case MutationKind::CM: cm_slots(cx, slots); break;
            case MutationKind::MM: mm_slots(cx, slots); break;
        }
        std::set<std::string> seen{base_text};
        int made = 0;
        constexpr int kMaxFailures = 16;
        while (made < limit_per_kind && !slots.empty()) {
            std::size_t si = krng.below(slots.size());
            Slot& slot = slots[si];
            Subroutine m = sub;
            Block& block = resolve(m, slot.loc.prefix);
            std::string payload;
            bool ok = true;
            if (slot.erase) {
                block.erase(block.begin() + slot.loc.index);
                payload = slot.removed;
            } else {
                auto st = slot.gen(krng);
                if (!st) {
                    ok = false;
                } else if (slot.edit == EditKind::Add) {
                    payload = stmt_record(*st);
                    block.insert(block.begin() + slot.loc.index, std::move(*st));
                } else {
                    payload = slot.edit == EditKind::Remove ? slot.removed : stmt_record(*st);
                    block[static_cast<std::size_t>(slot.loc.index)] = std::move(*st);
                }
            }
            bool exhausted = slot.erase || (slot.gen && slot.edit == EditKind::Remove);
            if (ok) {
                std::string text = to_text(m);
                ok = seen.insert(text).second && is_valid(m, lib);
            }
            if (ok) {
                Mutant mu;
                mu.base = sub.name;
                mu.kind = kind;
                mu.edit = slot.edit;
                mu.site = sub.name + ":" + slot.loc.path();
                mu.payload = std::move(payload);
                mu.program = std::make_shared<const Subroutine>(std::move(m));
                mu.seed = krng.seed();
                out.push_back(std::move(mu));
                ++made;
            } else {
                ++slot.failures;
            }
            if (exhausted || slot.failures >= kMaxFailures) slots.erase(slots.begin() + static_cast<long>(si));
        }
    }
    return out;
}

std::string corpus_manifest(const std::vector<Mutant>& mutants) {
    std::string out = "base,kind,edit,site,payload,seed\n";
    for (const auto& m : mutants) out += m.manifest_line() + "\n";
    return out;
}

void write_corpus(const std::vector<Mutant>& mutants, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream(fs::path(dir) / "manifest.csv") << corpus_manifest(mutants);
    for (std::size_t i = 0; i < mutants.size(); ++i) {
        std::ofstream f(fs::path(dir) / (mutants[i].id(i) + ".qir"));
        if (!f) throw std::runtime_error("cannot write corpus file in " + dir);
        f << to_text(*mutants[i].program);
    }
}

namespace {

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                out.back() += '"', ++i;
            else if (c == '"')
                quoted = false;
            else
                out.back() += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

EditKind edit_kind_from(const std::string& s) {
    for (EditKind e : {EditKind::Add, EditKind::Remove, EditKind::Replace})
        if (edit_kind_name(e) == s) return e;
    throw std::invalid_argument("unknown edit kind '" + s + "'");
}

}  // namespace

std::vector<Mutant> read_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream manifest(fs::path(dir) / "manifest.csv");
    if (!manifest) throw std::runtime_error("no manifest.csv in " + dir);
    std::string line;
    std::getline(manifest, line);
    if (line != "base,kind,edit,site,payload,seed") throw std::invalid_argument("unexpected manifest header in " + dir);
    std::vector<Mutant> out;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        auto f = csv_split(line);
        if (f.size() != 6) throw std::invalid_argument("manifest row " + std::to_string(out.size() + 1) + " has " + std::to_string(f.size()) + " fields");
        Mutant m;
        m.base = f[0];
        m.kind = mutation_kind_from(f[1]);
        m.edit = edit_kind_from(f[2]);
        m.site = f[3];
        m.payload = f[4];
        m.seed = std::stoull(f[5]);
        std::ifstream q(fs::path(dir) / (m.id(out.size()) + ".qir"));
        if (!q) throw std::runtime_error("missing " + m.id(out.size()) + ".qir in " + dir);
        std::stringstream ss;
        ss << q.rdbuf();
        m.program = std::make_shared<const Subroutine>(from_text(ss.str()));
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------- triggers

TriggerOracle::TriggerOracle(Invocation oracle) : oracle_(std::move(oracle)) {
    if (!oracle_.lib || !oracle_.sub) throw std::invalid_argument("trigger oracle needs a bound subroutine");
    if (is_adjointable(*oracle_.sub, *oracle_.lib))
        inverse_ = std::make_shared<const Subroutine>(inverse_of(*oracle_.sub, *oracle_.lib));
}

bool TriggerOracle::trial(const SubPtr& program, InputKind kind, Rng& rng) const {
    const int n = static_cast<int>(oracle_.io_in.size());
    PreparedInput in = sample_input(kind, n, rng);
    Invocation mut = oracle_.with_sub(program);
    if (inverse_) {
        StateVector s(oracle_.n_qubits);
        in.prepare(s, oracle_.io_in);
        try {
            mut.run(s, rng);
            oracle_.with_sub(inverse_).run(s, rng);
        } catch (const std::exception&) {
            return true;
        }
        in.unprepare(s, oracle_.io_in);
        auto bits = s.measure(oracle_.io_in, rng);
        return std::any_of(bits.begin(), bits.end(), [](int b) { return b != 0; });
    }

    Rng shared(rng.next_u64());
    StateVector a(oracle_.n_qubits), b(oracle_.n_qubits);
    in.prepare(a, oracle_.io_in);
    in.prepare(b, oracle_.io_in);
    Rng ra = shared, rb = shared;
    std::map<std::string, Value> expect = oracle_.run(a, ra);
    std::map<std::string, Value> got;
    try {
        got = mut.run(b, rb);
    } catch (const std::exception&) {
        return true;
    }
    for (const auto& [k, v] : expect) {
        auto it = got.find(k);
        if (it == got.end() || !value_equal(it->second, v)) return true;
    }
    Rng ma(rng.next_u64());
    Rng mb = ma;
    return a.measure(oracle_.io_out, ma) != b.measure(oracle_.io_out, mb);
}

bool trigger_trial(const Mutant& mutant, const TriggerOracle& oracle, InputKind kind, Rng& rng) {
    return oracle.trial(mutant.program, kind, rng);
}

}  // namespace qtk
