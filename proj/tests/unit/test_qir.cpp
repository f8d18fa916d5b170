#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qtk/qir/interp.hpp"
#include "qtk/qir/serialize.hpp"
#include "qtk/qir/validate.hpp"
#include "qtk/qir/variants.hpp"

using namespace qtk;
using namespace qtk::ir;

namespace {

struct Env : EvalEnv {
    std::map<std::string, Value> v;
    const Value* lookup(const std::string& n) const override {
        auto it = v.find(n);
        return it == v.end() ? nullptr : &it->second;
    }
    std::optional<std::int64_t> register_length(const std::string& n) const override {
        if (n == "qs") return 5;
        return std::nullopt;
    }
};

Value eval_text(const std::string& text, std::map<std::string, Value> vars = {}) {
    Env e;
    e.v = std::move(vars);
    return evaluate(Expr::parse(text), e);
}

StateVector random_state(int n, Rng& rng) {
    std::vector<cplx> a(std::size_t{1} << n);
    double norm = 0;
    for (auto& x : a) {
        x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
        norm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(norm);
    return StateVector::from_amplitudes(a);
}

Library small_lib() {
    Library lib;
    // Rot(k, q): R1(pi / 2^k) on q[0]
    lib.add(Subroutine{"Rot",
                       {int_param("k"), qubits_param("q", 1)},
                       {assign("theta", Expr(std::numbers::pi) / fn("float", {Expr(1) << V("k")})),
                        gate(GateKind::R1, V("theta"), {at("q", 0)})},
                       {}});
    // Ladder(n, qs): H on all, then Rot between neighbours
    lib.add(Subroutine{"Ladder",
                       {int_param("n"), qubits_param("qs", V("n"))},
                       {for_("i", 0, V("n") - 1, {gate(GateKind::H, {at("qs", V("i"))})}),
                        for_("i", 0, V("n") - 2,
                             {ctrl({controls(elem("qs", V("i") + 1))},
                                   call("Rot", {carg(V("i") + 1), qarg(slice("qs", V("i"), 1))}))}),
                        gate(GateKind::S, {at("qs", 0)}),
                        gate(GateKind::T, {at("qs", V("n") - 1)})},
                       {}});
    return lib;
}

// Random measurement-free program over one register of length n.
Block random_block(Rng& rng, int n, int depth, int& counter) {
    Block b;
    int len = 2 + static_cast<int>(rng.below(4));
    const GateKind kinds[] = {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg,
                              GateKind::T, GateKind::Tdg, GateKind::R1, GateKind::Rz, GateKind::CNOT, GateKind::SWAP,
                              GateKind::Toffoli, GateKind::CSWAP};
    auto pick = [&](std::vector<int>& used) {
        int q;
        do q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        while (std::find(used.begin(), used.end(), q) != used.end());
        used.push_back(q);
        return q;
    };
    for (int i = 0; i < len; ++i) {
        int choice = static_cast<int>(rng.below(depth > 1 ? 5 : 8));
        if (choice < 4) {
            GateKind k = kinds[rng.below(std::size(kinds))];
            if (gate_arity(k) > n) k = GateKind::H;
            std::vector<int> used;
            std::vector<QubitRef> t;
            for (int a = 0; a < gate_arity(k); ++a) t.push_back(at("qs", pick(used)));
            if (gate_has_angle(k))
                b.push_back(gate(k, Expr(rng.uniform() * 3) * V("a"), t));
            else
                b.push_back(gate(k, t));
        } else if (choice == 4) {
            std::vector<int> used;
            int c = pick(used), t = pick(used);
            std::vector<int> pol{static_cast<int>(rng.below(2))};
            b.push_back(ctrl({controls(elem("qs", c), pol)}, gate(GateKind::H, {at("qs", t)})));
        } else if (choice == 5) {
            std::string v = "i" + std::to_string(counter++);
            b.push_back(for_(v, 0, n - 1, {gate(GateKind::R1, Expr(0.3) * fn("float", {V(v) + 1}), {at("qs", V(v))})},
                             rng.below(2) == 1));
        } else if (choice == 6) {
            b.push_back(within(random_block(rng, n, depth + 1, counter), random_block(rng, n, depth + 1, counter)));
        } else {
            b.push_back(if_(gt(V("a"), 0.5), random_block(rng, n, depth + 1, counter),
                            random_block(rng, n, depth + 1, counter)));
        }
    }
    return b;
}

Subroutine random_sub(Rng& rng, int n, int& counter) {
    return Subroutine{"Rand", {float_param("a"), qubits_param("qs", n)}, random_block(rng, n, 0, counter), {}};
}

}  // namespace

// ---------------------------------------------------------------- expressions

TEST(Expr, PrecedenceAndPrinting) {
    EXPECT_EQ(Expr::parse("1 + 2 * 3").str(), "1 + 2 * 3");
    EXPECT_EQ(Expr::parse("(1 + 2) * 3").str(), "(1 + 2) * 3");
    EXPECT_EQ(Expr::parse("a - (b - c)").str(), "a - (b - c)");
    EXPECT_EQ(Expr::parse("1 << k").str(), "1 << k");
    EXPECT_EQ(Expr::parse("-3").str(), "-3");
    EXPECT_EQ(Expr::parse("2.0").str(), "2.0");
    EXPECT_EQ(Expr::parse("x == 1 && !b").str(), "x == 1 && !b");
    EXPECT_EQ(Expr::parse("len(qs) / 2 - 1").str(), "len(qs) / 2 - 1");
}

TEST(Expr, Evaluation) {
    EXPECT_TRUE(value_equal(eval_text("7 / 2"), Value{std::int64_t{3}}));
    EXPECT_TRUE(value_equal(eval_text("7 / 2.0"), Value{3.5}));
    EXPECT_TRUE(value_equal(eval_text("1 << 4"), Value{std::int64_t{16}}));
    EXPECT_TRUE(value_equal(eval_text("len(qs) - 1"), Value{std::int64_t{4}}));
    EXPECT_TRUE(value_equal(eval_text("round(sqrt(float(16)))"), Value{std::int64_t{4}}));
    EXPECT_TRUE(value_equal(eval_text("k % 3 == 1", {{"k", std::int64_t{7}}}), Value{true}));
    EXPECT_TRUE(value_equal(eval_text("min(2, 3.5)"), Value{2.0}));
    EXPECT_THROW(eval_text("1 / 0"), ExprError);
    EXPECT_THROW(eval_text("y + 1"), ExprError);
    EXPECT_THROW(eval_text("true + 1"), ExprError);
    EXPECT_THROW(Expr::parse("1 +"), ExprError);
}

TEST(Expr, ParsePrintRoundTripProperty) {
    Rng rng(3);
    const Op ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Mod, Op::Shl, Op::BitAnd, Op::BitXor};
    for (int trial = 0; trial < 300; ++trial) {
        std::function<Expr(int)> gen = [&](int d) -> Expr {
            if (d == 0 || rng.below(3) == 0) {
                switch (rng.below(3)) {
                    case 0: return Expr(static_cast<std::int64_t>(rng.between(-5, 9)));
                    case 1: return V(std::string(1, static_cast<char>('a' + rng.below(3))));
                    default: return -V("b");
                }
            }
            return Expr::binary(ops[rng.below(std::size(ops))], gen(d - 1), gen(d - 1));
        };
        Expr e = gen(4);
        Expr back = Expr::parse(e.str());
        EXPECT_EQ(back.str(), e.str());
        Env env;
        env.v = {{"a", std::int64_t{3}}, {"b", std::int64_t{-2}}, {"c", std::int64_t{5}}};
        std::optional<Value> x, y;
        try { x = evaluate(e, env); } catch (const ExprError&) {}
        try { y = evaluate(back, env); } catch (const ExprError&) {}
        ASSERT_EQ(x.has_value(), y.has_value());
        if (x) EXPECT_TRUE(value_equal(*x, *y)) << e.str();
    }
}

// ---------------------------------------------------------------- interpreter

TEST(Interp, CallsLoopsAndControls) {
    Library lib = small_lib();
    Rng rng(1);
    auto res = execute(lib, *lib.get("Ladder"), {arg_int(3), arg_qubits({0, 1, 2})}, StateVector(3), rng);
    // Oracle: same circuit directly on the simulator
    StateVector want(3);
    for (int q = 0; q < 3; ++q) {
        std::vector<int> t{q};
        want.apply(Gate(GateKind::H), t);
    }
    for (int i = 0; i < 2; ++i) {
        std::vector<int> c{i + 1}, p{1}, t{i};
        want.apply_controlled(Gate(GateKind::R1, std::numbers::pi / double(1 << (i + 1))), c, p, t);
    }
    std::vector<int> t0{0}, t2{2};
    want.apply(Gate(GateKind::S), t0);
    want.apply(Gate(GateKind::T), t2);
    EXPECT_NEAR(res.final_state.fidelity(want), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(res.final_state.inner(want) - 1.0), 0.0, 1e-12);
}

TEST(Interp, AdjointCallUndoes) {
    Library lib = small_lib();
    Subroutine both{"Both",
                    {qubits_param("qs", 3)},
                    {call("Ladder", {carg(3), qarg(whole("qs"))}), call("Ladder", {carg(3), qarg(whole("qs"))}, true)},
                    {}};
    Rng rng(2);
    StateVector s = random_state(3, rng);
    auto res = execute(lib, both, {arg_qubits({0, 1, 2})}, s, rng);
    EXPECT_NEAR(std::abs(res.final_state.inner(s) - 1.0), 0.0, 1e-12);
}

TEST(Interp, MeasurementReturnsBigEndianValue) {
    Library lib;
    Subroutine m{"M", {qubits_param("q", 3)}, {gate(GateKind::X, {at("q", 0)}), gate(GateKind::X, {at("q", 2)}),
                                               measure("r", {at("q", 0), at("q", 1), at("q", 2)})},
                 {"r"}};
    Rng rng(3);
    auto res = execute(lib, m, {arg_qubits({0, 1, 2})}, StateVector(3), rng);
    EXPECT_TRUE(value_equal(res.classical_outputs.at("r"), Value{std::int64_t{5}}));
    ASSERT_EQ(res.measurement_log.size(), 1u);
    EXPECT_EQ(res.measurement_log[0].site, "M:2");
    EXPECT_EQ(res.measurement_log[0].bits, (std::vector<int>{1, 0, 1}));
}

TEST(Interp, FaultsCarryKindAndSite) {
    Library lib;
    Rng rng(4);
    Subroutine oob{"Oob", {qubits_param("q", 2)}, {for_("i", 0, 2, {gate(GateKind::H, {at("q", V("i"))})})}, {}};
    try {
        execute(lib, oob, {arg_qubits({0, 1})}, StateVector(2), rng);
        FAIL();
    } catch (const Fault& f) {
        EXPECT_EQ(f.kind(), FaultKind::IndexOutOfRange);
        EXPECT_EQ(f.site(), "Oob:0.body.0");
    }
    Subroutine spin{"Spin", {qubits_param("q", 1)}, {repeat({gate(GateKind::X, {at("q", 0)})}, Expr(false), 10)}, {}};
    try {
        execute(lib, spin, {arg_qubits({0})}, StateVector(1), rng);
        FAIL();
    } catch (const Fault& f) {
        EXPECT_EQ(f.kind(), FaultKind::Divergence);
    }
    Subroutine rec{"Rec", {qubits_param("q", 1)}, {call("Rec", {qarg(whole("q"))})}, {}};
    lib.add(rec);
    try {
        execute(lib, rec, {arg_qubits({0})}, StateVector(1), rng);
        FAIL();
    } catch (const Fault& f) {
        EXPECT_EQ(f.kind(), FaultKind::Divergence);
    }
    EXPECT_THROW(execute(lib, oob, {arg_qubits({0, 1, 0})}, StateVector(3), rng), Fault);
}

TEST(Interp, RepeatUntilTerminatesOnMeasurement) {
    Library lib;
    Subroutine r{"R",
                 {qubits_param("q", 1)},
                 {repeat({gate(GateKind::H, {at("q", 0)}), measure("m", {at("q", 0)})}, eq(V("m"), 1))},
                 {"m"}};
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        auto res = execute(lib, r, {arg_qubits({0})}, StateVector(1), rng);
        EXPECT_TRUE(value_equal(res.classical_outputs.at("m"), Value{std::int64_t{1}}));
    }
}

TEST(Interp, HandleWithBoundArguments) {
    Library lib = small_lib();
    Subroutine apply{"Apply",
                     {handle_param("op", {ParamKind::Qubits}), qubits_param("q", 1)},
                     {call("op", {qarg(whole("q"))}), call("op", {qarg(whole("q"))})},
                     {}};
    Rng rng(6);
    StateVector s(1);
    std::vector<int> t{0};
    s.apply(Gate(GateKind::H), t);
    auto res = execute(lib, apply, {arg_handle(lib.get("Rot"), {std::int64_t{2}}), arg_qubits({0})}, s, rng);
    // Two pi/4 rotations make S
    StateVector want = s;
    want.apply(Gate(GateKind::S), t);
    EXPECT_NEAR(std::abs(res.final_state.inner(want) - 1.0), 0.0, 1e-12);
}

TEST(Interp, WithinApplyConjugates) {
    Library lib;
    // within H apply Z  ==  X
    Subroutine w{"W", {qubits_param("q", 1)}, {within({gate(GateKind::H, {at("q", 0)})}, {gate(GateKind::Z, {at("q", 0)})})}, {}};
    Rng rng(7);
    auto res = execute(lib, w, {arg_qubits({0})}, StateVector(1), rng);
    EXPECT_NEAR(std::norm(res.final_state.amplitude(1)), 1.0, 1e-12);
}

TEST(Interp, MeasurementUnderControlIsAFault) {
    Library lib;
    lib.add(Subroutine{"Meas", {qubits_param("q", 1)}, {measure("m", {at("q", 0)})}, {"m"}});
    Subroutine c{"C", {qubits_param("q", 2)}, {ctrl({controls(elem("q", 0))}, call("Meas", {qarg(slice("q", 1, 1))}))}, {}};
    Rng rng(8);
    try {
        execute(lib, c, {arg_qubits({0, 1})}, StateVector(2), rng);
        FAIL();
    } catch (const Fault& f) {
        EXPECT_EQ(f.kind(), FaultKind::Variant);
    }
}

// ---------------------------------------------------------------- variants

TEST(Variants, InverseComposesToIdentityProperty) {
    Rng rng(21);
    Library lib;
    int counter = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + static_cast<int>(rng.below(3));
        Subroutine sub = random_sub(rng, n, counter);
        ASSERT_TRUE(is_adjointable(sub, lib));
        Subroutine inv = inverse_of(sub, lib);
        EXPECT_EQ(inverse_of(inv, lib), sub) << "double inverse differs";
        std::vector<int> qs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) qs[static_cast<std::size_t>(i)] = i;
        StateVector s = random_state(n, rng);
        StateVector t = s;
        double a = rng.uniform();
        run_in_place(lib, sub, {arg_float(a), arg_qubits(qs)}, t, rng);
        run_in_place(lib, inv, {arg_float(a), arg_qubits(qs)}, t, rng);
        EXPECT_NEAR(std::abs(t.inner(s) - 1.0), 0.0, 1e-10) << to_text(sub);
    }
}

TEST(Variants, ClassicalStatementsAreHoisted) {
    Library lib = small_lib();
    Subroutine inv = inverse_of(*lib.get("Rot"), lib);
    ASSERT_EQ(inv.body.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<Assign>(inv.body[0].node));
    const auto& g = std::get<GateApp>(inv.body[1].node);
    EXPECT_EQ(g.angle.str(), "-theta");
    EXPECT_EQ(inv.name, "Rot$adj");
}

TEST(Variants, AdjointabilityRules) {
    Library lib;
    Subroutine meas{"M", {qubits_param("q", 1)}, {measure("m", {at("q", 0)})}, {}};
    EXPECT_FALSE(is_adjointable(meas, lib));
    EXPECT_THROW(inverse_of(meas, lib), VariantError);
    // classical write after a quantum read of the same variable
    Subroutine bad{"B",
                   {qubits_param("q", 1)},
                   {assign("t", 0.5), gate(GateKind::R1, V("t"), {at("q", 0)}), assign("t", 1.5),
                    gate(GateKind::R1, V("t"), {at("q", 0)})},
                   {}};
    EXPECT_FALSE(is_adjointable(bad, lib));
    lib.add(meas);
    Subroutine calls{"Cm", {qubits_param("q", 1)}, {call("M", {qarg(whole("q"))})}, {}};
    EXPECT_FALSE(is_adjointable(calls, lib));
    EXPECT_TRUE(find_measurement(calls, lib).has_value());
    EXPECT_EQ(*find_measurement(calls, lib), "M:0");
}

TEST(Variants, ControlledActsOnlyWhenControlsSet) {
    Library lib = small_lib();
    Subroutine c = controlled_of(*lib.get("Ladder"), lib);
    EXPECT_EQ(c.params[0].name, "ctl");
    Rng rng(22);
    for (int ctlbits = 0; ctlbits < 4; ++ctlbits) {
        StateVector s = random_state(3, rng);
        StateVector full = StateVector::basis(2, static_cast<std::uint64_t>(ctlbits)).tensor(s);
        run_in_place(lib, c, {arg_qubits({0, 1}), arg_int(3), arg_qubits({2, 3, 4})}, full, rng);
        StateVector want = s;
        if (ctlbits == 3) run_in_place(lib, *lib.get("Ladder"), {arg_int(3), arg_qubits({0, 1, 2})}, want, rng);
        StateVector want_full = StateVector::basis(2, static_cast<std::uint64_t>(ctlbits)).tensor(want);
        EXPECT_NEAR(std::abs(full.inner(want_full) - 1.0), 0.0, 1e-12) << ctlbits;
    }
}

TEST(Variants, PowerRepeats) {
    Library lib = small_lib();
    Rng rng(23);
    StateVector s = random_state(3, rng);
    for (int k : {-2, -1, 0, 2, 3}) {
        Subroutine p = power_of(*lib.get("Ladder"), k, lib);
        StateVector got = s, want = s;
        run_in_place(lib, p, {arg_int(3), arg_qubits({0, 1, 2})}, got, rng);
        const Subroutine& base = *lib.get("Ladder");
        Subroutine step = k < 0 ? inverse_of(base, lib) : base;
        for (int i = 0; i < std::abs(k); ++i) run_in_place(lib, step, {arg_int(3), arg_qubits({0, 1, 2})}, want, rng);
        EXPECT_NEAR(std::abs(got.inner(want) - 1.0), 0.0, 1e-12) << k;
    }
}

TEST(Variants, ReindexEndianReversesRegister) {
    Library lib;
    Subroutine flip{"Flip", {qubits_param("q")}, {gate(GateKind::X, {at("q", 0)})}, {}};
    Rng rng(24);
    // Output side: X on the first qubit, then reversed onto the last one
    auto out = execute(lib, reindex_endian(flip, "q", EndianSide::Output), {arg_qubits({0, 1, 2})}, StateVector(3), rng);
    EXPECT_NEAR(std::norm(out.final_state.amplitude(0b001)), 1.0, 1e-12);
    // Input side: |001> is read as |100>, which X clears
    auto in = execute(lib, reindex_endian(flip, "q", EndianSide::Input), {arg_qubits({0, 1, 2})}, StateVector::basis(3, 1), rng);
    EXPECT_NEAR(std::norm(in.final_state.amplitude(0)), 1.0, 1e-12);
    // Both sides on a 4-qubit register: X lands on the last qubit
    auto both = execute(lib, reindex_endian(flip, "q"), {arg_qubits({0, 1, 2, 3})}, StateVector(4), rng);
    EXPECT_NEAR(std::norm(both.final_state.amplitude(0b0001)), 1.0, 1e-12);
}

TEST(Variants, ClassicalSubstituteKeepsSkeleton) {
    Subroutine s{"S",
                 {qubits_param("q", 2)},
                 {gate(GateKind::H, {at("q", 0)}), measure("a", {at("q", 0)}),
                  if_(eq(V("a"), 1), {gate(GateKind::X, {at("q", 1)}), measure("b", {at("q", 1)})},
                      {assign("b", 7)})},
                 {"a", "b"}};
    Subroutine c = classical_substitute(s);
    ASSERT_EQ(c.params.size(), 3u);
    EXPECT_EQ(c.params[1].name, "set_a");
    EXPECT_EQ(c.params[2].name, "set_b");
    Library lib;
    Rng rng(25);
    auto r1 = execute(lib, c, {arg_qubits({0, 1}), arg_int(1), arg_int(0)}, StateVector(2), rng);
    EXPECT_TRUE(value_equal(r1.classical_outputs.at("b"), Value{std::int64_t{0}}));
    auto r0 = execute(lib, c, {arg_qubits({0, 1}), arg_int(0), arg_int(1)}, StateVector(2), rng);
    EXPECT_TRUE(value_equal(r0.classical_outputs.at("b"), Value{std::int64_t{7}}));
}

// ---------------------------------------------------------------- serialization

TEST(Serialize, RoundTripIsBitExactProperty) {
    Rng rng(31);
    int counter = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Subroutine sub = random_sub(rng, 3 + static_cast<int>(rng.below(3)), counter);
        std::string text = to_text(sub);
        Subroutine back = from_text(text);
        EXPECT_EQ(back, sub);
        EXPECT_EQ(to_text(back), text);
    }
}

TEST(Serialize, AllStatementKinds) {
    Library lib = small_lib();
    Subroutine s{"All",
                 {int_param("n"), bool_param("f"), handle_param("op", {ParamKind::Int, ParamKind::Qubits}),
                  qubits_param("q", V("n") + 1)},
                 {measure("m", {at("q", 0), at("q", V("n"))}),
                  if_(V("f"), {call("op", {carg(2), qarg(slice("q", 1, V("n")))})}),
                  repeat({measure("z", {at("q", 0)})}, eq(V("z"), 0), 50),
                  ctrl({controls(slice("q", 0, 2), {1, 0})}, call("Rot", {carg(1), qarg(elem("q", 2))}, true)),
                  call("Other", {carg(V("m")), qarg(whole("q"))}, false, {"x", "y"}),
                  for_("i", 0, V("n"), {}, true)},
                 {"m"}};
    std::string text = to_text(s);
    EXPECT_EQ(text.substr(0, 6), "qir/1\n");
    EXPECT_EQ(from_text(text), s);
    Library l2;
    l2.add(s);
    l2.add(*lib.get("Rot"));
    Library back = library_from_text(library_to_text(l2));
    EXPECT_EQ(back.names(), l2.names());
    EXPECT_EQ(*back.get("All"), s);
}

TEST(Serialize, RejectsMalformed) {
    EXPECT_THROW(from_text("nope"), FormatError);
    EXPECT_THROW(from_text("qir/1\n{\"name\":\"x\",\"params\":[],\"returns\":[]}\n{\"op\":\"warp\"}\n"), FormatError);
    EXPECT_THROW(from_text("qir/1\n{\"name\":\"x\",\"params\":[],\"returns\":[]}\n   {\"op\":\"within\"}\n"), FormatError);
}

// ---------------------------------------------------------------- validation

TEST(Validate, AcceptsWellFormed) {
    Library lib = small_lib();
    for (const auto& name : lib.names()) EXPECT_TRUE(is_valid(*lib.get(name), lib)) << name;
    Rng rng(41);
    int counter = 0;
    for (int i = 0; i < 30; ++i) EXPECT_TRUE(is_valid(random_sub(rng, 4, counter), lib));
}

TEST(Validate, RejectsIllFormed) {
    Library lib = small_lib();
    auto bad = [&](Block body) {
        Subroutine s{"Bad", {int_param("n"), qubits_param("q", V("n"))}, std::move(body), {}};
        return !is_valid(s, lib);
    };
    EXPECT_TRUE(bad({gate(GateKind::CNOT, {at("q", 0)})}));
    EXPECT_TRUE(bad({gate(GateKind::R1, {at("q", 0)})}));
    EXPECT_TRUE(bad({gate(GateKind::H, {at("r", 0)})}));
    EXPECT_TRUE(bad({gate(GateKind::H, {at("q", 0.5)})}));
    EXPECT_TRUE(bad({call("Nope", {})}));
    EXPECT_TRUE(bad({call("Rot", {qarg(whole("q"))})}));
    EXPECT_TRUE(bad({if_(V("n"), {})}));
    EXPECT_TRUE(bad({gate(GateKind::H, {at("q", V("i"))})}));
    EXPECT_TRUE(bad({within({measure("m", {at("q", 0)})}, {})}));
    EXPECT_FALSE(bad({for_("i", 0, V("n") - 1, {gate(GateKind::H, {at("q", V("i"))})})}));
}
