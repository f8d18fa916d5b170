#include "programs.hpp"

#include <numbers>

namespace qtk::bench {

using namespace ir;

namespace {

constexpr double kPi = std::numbers::pi;

Expr bit_of(const Expr& value, const Expr& n, const Expr& i) { return (value >> (n - 1 - i)) & Expr(1); }

Stmt h_all(const std::string& reg, const Expr& n) { return for_("i", 0, n - 1, {gate(GateKind::H, {at(reg, V("i"))})}); }

}  // namespace

Subroutine reset() {
    return Subroutine{"Reset",
                      {int_param("n"), qubits_param("qs", V("n"))},
                      {for_("i", 0, V("n") - 1,
                            {measure("m", {at("qs", V("i"))}), if_(eq(V("m"), Expr(1)), {gate(GateKind::X, {at("qs", V("i"))})})})},
                      {}};
}

Subroutine qrandom() {
    return Subroutine{"QRandom",
                      {int_param("n"), qubits_param("qs", V("n"))},
                      {h_all("qs", V("n")), assign("r", Expr(0)),
                       for_("i", 0, V("n") - 1, {measure("b", {at("qs", V("i"))}), assign("r", V("r") * Expr(2) + V("b"))})},
                      {"r"}};
}

Subroutine gen_qint() {
    return Subroutine{"GenQInt",
                      {int_param("n"), int_param("x"), qubits_param("qs", V("n"))},
                      {for_("i", 0, V("n") - 1,
                            {if_(eq(bit_of(V("x"), V("n"), V("i")), Expr(1)), {gate(GateKind::X, {at("qs", V("i"))})})})},
                      {}};
}

// Prepares |a> with a's bit p clear, puts qubit p in |+> and copies it onto
// every other position where a and b differ.
Subroutine gen_x_plus_y() {
    Expr n = V("n");
    return Subroutine{
        "GenXPlusY",
        {int_param("n"), int_param("x"), int_param("y"), qubits_param("qs", n)},
        {assign("p", Expr(-1)),
         for_("i", 0, n - 1,
              {if_(land(eq(V("p"), Expr(-1)), ne(bit_of(V("x"), n, V("i")), bit_of(V("y"), n, V("i")))), {assign("p", V("i"))})}),
         assign("a", V("x")), assign("b", V("y")),
         if_(land(ge(V("p"), Expr(0)), eq(bit_of(V("x"), n, V("p")), Expr(1))), {assign("a", V("y")), assign("b", V("x"))}),
         call("GenQInt", {carg(n), carg(V("a")), qarg(whole("qs"))}),
         if_(ge(V("p"), Expr(0)),
             {gate(GateKind::H, {at("qs", V("p"))}),
              for_("i", 0, n - 1,
                   {if_(land(ne(V("i"), V("p")), ne(bit_of(V("a"), n, V("i")), bit_of(V("b"), n, V("i")))),
                        {gate(GateKind::CNOT, {at("qs", V("p")), at("qs", V("i"))})})})})},
        {}};
}

Subroutine gen_max_sup() {
    return Subroutine{"GenMaxSup", {int_param("n"), qubits_param("qs", V("n"))}, {h_all("qs", V("n"))}, {}};
}

// Draws r uniformly by measuring |+> on each qubit, resets, then prepares |r>.
Subroutine gen_max_mix() {
    return Subroutine{"GenMaxMix",
                      {int_param("n"), qubits_param("qs", V("n"))},
                      {assign("r", Expr(0)),
                       for_("i", 0, V("n") - 1,
                            {gate(GateKind::H, {at("qs", V("i"))}), measure("m", {at("qs", V("i"))}),
                             assign("r", V("r") * Expr(2) + V("m")),
                             if_(eq(V("m"), Expr(1)), {gate(GateKind::X, {at("qs", V("i"))})})}),
                       call("GenQInt", {carg(V("n")), carg(V("r")), qarg(whole("qs"))})},
                      {}};
}

Subroutine swap_test() {
    return Subroutine{
        "SwapTest",
        {int_param("n"), handle_param("GenRho1", {ParamKind::Qubits}), handle_param("GenRho2", {ParamKind::Qubits}),
         qubits_param("anc", 1), qubits_param("a", V("n")), qubits_param("b", V("n"))},
        {call("GenRho1", {qarg(whole("a"))}), call("GenRho2", {qarg(whole("b"))}), gate(GateKind::H, {at("anc", 0)}),
         for_("i", 0, V("n") - 1, {ctrl({controls(whole("anc"))}, gate(GateKind::SWAP, {at("a", V("i")), at("b", V("i"))}))}),
         gate(GateKind::H, {at("anc", 0)}), measure("result", {at("anc", 0)})},
        {"result"}};
}

namespace {

Block swap_test_rounds(const std::string& g1, const std::string& g2) {
    return {assign("ones", Expr(0)),
            for_("r", 1, V("t"),
                 {call("SwapTest",
                       {carg(V("n")), harg(g1), harg(g2), qarg(whole("anc")), qarg(whole("a")), qarg(whole("b"))}, false,
                       {"res"}),
                  assign("ones", V("ones") + V("res")), call("Reset", {carg(Expr(1)), qarg(whole("anc"))}),
                  call("Reset", {carg(V("n")), qarg(whole("a"))}), call("Reset", {carg(V("n")), qarg(whole("b"))})})};
}

}  // namespace

Subroutine purity() {
    Block body = swap_test_rounds("GenRho", "GenRho");
    body.push_back(assign("isPure", eq(V("ones"), Expr(0))));
    return Subroutine{"Purity",
                      {int_param("n"), int_param("t"), handle_param("GenRho", {ParamKind::Qubits}), qubits_param("anc", 1),
                       qubits_param("a", V("n")), qubits_param("b", V("n"))},
                      body,
                      {"isPure"}};
}

Subroutine inner_product() {
    Block body = swap_test_rounds("GenRho1", "GenRho2");
    body.push_back(assign("est", Expr(1.0) - Expr(2.0) * fn("float", {V("ones")}) / fn("float", {V("t")})));
    return Subroutine{"InnerProduct",
                      {int_param("n"), int_param("t"), handle_param("GenRho1", {ParamKind::Qubits}),
                       handle_param("GenRho2", {ParamKind::Qubits}), qubits_param("anc", 1), qubits_param("a", V("n")),
                       qubits_param("b", V("n"))},
                      body,
                      {"est"}};
}

Subroutine empty() { return Subroutine{"Empty", {int_param("n"), qubits_param("qs", V("n"))}, {}, {}}; }

Subroutine reverse() {
    return Subroutine{"Reverse",
                      {int_param("n"), qubits_param("qs", V("n"))},
                      {for_("i", 0, V("n") / 2 - 1, {gate(GateKind::SWAP, {at("qs", V("i")), at("qs", V("n") - 1 - V("i"))})})},
                      {}};
}

Subroutine multi_swap() {
    return Subroutine{"MultiSWAP",
                      {int_param("n"), qubits_param("qs1", V("n")), qubits_param("qs2", V("n"))},
                      {for_("i", 0, V("n") - 1, {gate(GateKind::SWAP, {at("qs1", V("i")), at("qs2", V("i"))})})},
                      {}};
}

Expr crk_angle(const Expr& k) { return Expr(kPi) / fn("float", {Expr(1) << k}); }

Subroutine crk() {
    return Subroutine{"CRk",
                      {int_param("k"), qubits_param("qctrl", 1), qubits_param("qtar", 1)},
                      {ctrl({controls(whole("qctrl"))}, gate(GateKind::R1, crk_angle(V("k")), {at("qtar", 0)}))},
                      {}};
}

// Flips the sign of |0...0>; equal to the x > 0 flip up to a global phase.
Subroutine phase_flip() {
    Expr n = V("n");
    return Subroutine{"PhaseFlip",
                      {int_param("n"), qubits_param("qs", n)},
                      {within({for_("i", 0, n - 1, {gate(GateKind::X, {at("qs", V("i"))})})},
                              {if_(gt(n, Expr(1)), {ctrl({controls(slice("qs", Expr(0), n - 1))}, gate(GateKind::Z, {at("qs", n - 1)}))},
                                   {gate(GateKind::Z, {at("qs", 0)})})})},
                      {}};
}

Subroutine grover() {
    Expr n = V("n");
    Expr rounds = fn("round", {Expr(kPi / 4) * fn("sqrt", {fn("float", {Expr(1) << n})})});
    return Subroutine{"Grover",
                      {int_param("n"), handle_param("OracleK", {ParamKind::Qubits}), qubits_param("qs", n)},
                      {h_all("qs", n),
                       for_("r", 1, rounds,
                            {call("OracleK", {qarg(whole("qs"))}), h_all("qs", n), call("PhaseFlip", {carg(n), qarg(whole("qs"))}),
                             h_all("qs", n)})},
                      {}};
}

Subroutine qft() {
    Expr n = V("n");
    return Subroutine{
        "QFT",
        {int_param("n"), qubits_param("qs", n)},
        {for_("i", 0, n - 2,
              {gate(GateKind::H, {at("qs", V("i"))}),
               for_("j", V("i") + 1, n - 1,
                    {call("CRk", {carg(V("j") - V("i")), qarg(elem("qs", V("j"))), qarg(elem("qs", V("i")))})})}),
         gate(GateKind::H, {at("qs", n - 1)}), call("Reverse", {carg(n), qarg(whole("qs"))})},
        {}};
}

// Fourier-space adder: qubit m of QFT(y) picks up pi / 2^(l + m - n + 1)
// for every set bit l of x with l + m >= n - 1.
Subroutine qadd() {
    Expr n = V("n");
    return Subroutine{"QAdd",
                      {int_param("n"), qubits_param("qs1", n), qubits_param("qs2", n)},
                      {call("QFT", {carg(n), qarg(whole("qs2"))}),
                       for_("m", 0, n - 1,
                            {for_("l", n - 1 - V("m"), n - 1,
                                  {call("CRk", {carg(V("l") + V("m") - n + 1), qarg(elem("qs1", V("l"))), qarg(elem("qs2", V("m")))})})}),
                       call("QFT", {carg(n), qarg(whole("qs2"))}, true)},
                      {}};
}

Subroutine teleport() {
    return Subroutine{"Teleport",
                      {qubits_param("qsrc", 1), qubits_param("qaux", 1), qubits_param("qdest", 1)},
                      {gate(GateKind::H, {at("qaux", 0)}), gate(GateKind::CNOT, {at("qaux", 0), at("qdest", 0)}),
                       gate(GateKind::CNOT, {at("qsrc", 0), at("qaux", 0)}), gate(GateKind::H, {at("qsrc", 0)}),
                       measure("m1", {at("qsrc", 0)}), measure("m2", {at("qaux", 0)}),
                       if_(eq(V("m2"), Expr(1)), {gate(GateKind::X, {at("qdest", 0)}), gate(GateKind::X, {at("qaux", 0)})}),
                       if_(eq(V("m1"), Expr(1)), {gate(GateKind::Z, {at("qdest", 0)}), gate(GateKind::X, {at("qsrc", 0)})})},
                      {}};
}

// Clock qubit Nclock-1-i controls Upower(2^i); the clock reads big-endian.
Subroutine qpe() {
    Expr nc = V("Nclock");
    return Subroutine{"QPE",
                      {int_param("Nclock"), int_param("Ntarget"), handle_param("Upower", {ParamKind::Int, ParamKind::Qubits}),
                       qubits_param("clock", nc), qubits_param("target", V("Ntarget"))},
                      {h_all("clock", nc),
                       for_("i", 0, nc - 1,
                            {ctrl({controls(elem("clock", nc - 1 - V("i")))},
                                  call("Upower", {carg(Expr(1) << V("i")), qarg(whole("target"))}))}),
                       call("QFT", {carg(nc), qarg(whole("clock"))}, true)},
                      {}};
}

// ---------------------------------------------------------------- test doubles

Subroutine x_power() {
    return Subroutine{"XPower",
                      {int_param("p"), qubits_param("qs", 1)},
                      {if_(eq(V("p") % Expr(2), Expr(1)), {gate(GateKind::X, {at("qs", 0)})})},
                      {}};
}

Subroutine h_power() {
    return Subroutine{"HPower",
                      {int_param("p"), qubits_param("qs", 1)},
                      {if_(eq(V("p") % Expr(2), Expr(1)), {gate(GateKind::H, {at("qs", 0)})})},
                      {}};
}

// Controlled (S tensor Sdg): qs[0] controls S on qs[1] and Sdg on qs[2].
Subroutine css_power() {
    return Subroutine{"CSSdgPower",
                      {int_param("p"), qubits_param("qs", 3)},
                      {for_("r", 1, V("p") % Expr(4),
                            {ctrl({controls(elem("qs", 0))}, gate(GateKind::S, {at("qs", 1)})),
                             ctrl({controls(elem("qs", 0))}, gate(GateKind::Sdg, {at("qs", 2)}))})},
                      {}};
}

// Controlled Rz(2 pi / 3): qs[0] controls qs[1].
Subroutine crz_power() {
    return Subroutine{"CRzPower",
                      {int_param("p"), qubits_param("qs", 2)},
                      {ctrl({controls(elem("qs", 0))},
                            gate(GateKind::Rz, fn("float", {V("p")}) * Expr(2 * kPi / 3), {at("qs", 1)}))},
                      {}};
}

// ---------------------------------------------------------------- buggy variants

Subroutine reverse_skip_last() {
    Subroutine s = reverse();
    s.name = "Reverse_bug";
    std::get<ForStmt>(s.body[0].node).hi = V("n") / 2 - 2;
    return s;
}

Subroutine crk_wrong_angle() {
    Subroutine s = crk();
    s.name = "CRk_bug";
    auto& c = std::get<ControlledApp>(s.body[0].node);
    std::get<GateApp>(c.inner).angle = crk_angle(V("k") + 1);
    return s;
}

// Without the final Reverse call the output comes out little-endian.
Subroutine qft_bilo() {
    Subroutine s = qft();
    s.name = "QFT_BILO";
    s.body.pop_back();
    return s;
}

Subroutine phase_flip_no_undo() {
    Expr n = V("n");
    Subroutine s = phase_flip();
    s.name = "PhaseFlip_bug";
    s.body = {for_("i", 0, n - 1, {gate(GateKind::X, {at("qs", V("i"))})}),
              if_(gt(n, Expr(1)), {ctrl({controls(slice("qs", Expr(0), n - 1))}, gate(GateKind::Z, {at("qs", n - 1)}))},
                  {gate(GateKind::Z, {at("qs", 0)})})};
    return s;
}

}  // namespace qtk::bench
