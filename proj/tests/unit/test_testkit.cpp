#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qtk/testkit/suite.hpp"

using namespace qtk;
using namespace qtk::ir;

namespace {

const char* kQpeMark = "QPE : (Nclock, Ntarget, sub:q:Upower, q:target) -> (q:clock'^BE)";

Subroutine gen_qint() {
    return Subroutine{"GenQInt",
                      {int_param("n"), int_param("x"), qubits_param("qs", V("n"))},
                      {for_("i", 0, V("n") - 1,
                            {if_(eq((V("x") >> (V("n") - 1 - V("i"))) & Expr(1), Expr(1)), {gate(GateKind::X, {at("qs", V("i"))})})})},
                      {}};
}

Subroutine qft() {
    Expr angle = Expr(std::numbers::pi) / fn("float", {Expr(1) << (V("j") - V("i"))});
    return Subroutine{
        "QFT",
        {int_param("n"), qubits_param("qs", V("n"))},
        {for_("i", 0, V("n") - 1,
              {gate(GateKind::H, {at("qs", V("i"))}),
               for_("j", V("i") + 1, V("n") - 1, {ctrl({controls(elem("qs", V("j")))}, gate(GateKind::R1, angle, {at("qs", V("i"))}))})}),
         for_("i", 0, V("n") / 2 - 1, {gate(GateKind::SWAP, {at("qs", V("i")), at("qs", V("n") - 1 - V("i"))})})},
        {}};
}

// Phase flip of |0...0> (equal to the x > 0 flip up to global phase).
Subroutine phase_flip() {
    return Subroutine{"PhaseFlip",
                      {int_param("n"), qubits_param("qs", V("n"))},
                      {within({for_("i", 0, V("n") - 1, {gate(GateKind::X, {at("qs", V("i"))})})},
                              {if_(gt(V("n"), Expr(1)),
                                   {ctrl({controls(slice("qs", Expr(0), V("n") - 1))}, gate(GateKind::Z, {at("qs", V("n") - 1)}))},
                                   {gate(GateKind::Z, {at("qs", 0)})})})},
                      {}};
}

Subroutine qrandom() {
    return Subroutine{"QRandom",
                      {int_param("n"), qubits_param("qs", V("n"))},
                      {for_("i", 0, V("n") - 1, {gate(GateKind::H, {at("qs", V("i"))})}),
                       assign("r", Expr(0)),
                       for_("i", 0, V("n") - 1, {measure("b", {at("qs", V("i"))}), assign("r", V("r") * Expr(2) + V("b"))})},
                      {"r"}};
}

Subroutine swap_test() {
    return Subroutine{"SwapTest",
                      {int_param("n"), handle_param("G1", {ParamKind::Qubits}), handle_param("G2", {ParamKind::Qubits}),
                       qubits_param("anc", 1), qubits_param("a", V("n")), qubits_param("b", V("n"))},
                      {call("G1", {qarg(whole("a"))}), call("G2", {qarg(whole("b"))}), gate(GateKind::H, {at("anc", 0)}),
                       for_("i", 0, V("n") - 1,
                            {ctrl({controls(whole("anc"))}, gate(GateKind::SWAP, {at("a", V("i")), at("b", V("i"))}))}),
                       gate(GateKind::H, {at("anc", 0)}), measure("result", {at("anc", 0)})},
                      {"result"}};
}

Library bench() {
    Library lib;
    for (auto s : {gen_qint(), qft(), phase_flip(), qrandom(), swap_test()}) lib.add(s);
    return lib;
}

TestCase make_case(const std::string& mark, CaseSpec cs) { return TestCase(IOMark::parse(mark), std::move(cs)); }

Value I(std::int64_t v) { return Value{v}; }

}  // namespace

// ---------------------------------------------------------------- IO marks

TEST(IOMark, QpeExample) {
    auto m = IOMark::parse(kQpeMark);
    EXPECT_EQ(m.program, "QPE");
    ASSERT_EQ(m.inputs.size(), 4u);
    ASSERT_EQ(m.outputs.size(), 1u);
    EXPECT_TRUE(m.inputs[2].is_subroutine);
    EXPECT_TRUE(m.inputs[2].is_quantum);
    EXPECT_FALSE(m.inputs[0].is_quantum);
    EXPECT_EQ(m.outputs[0].name, "clock");
    EXPECT_EQ(m.outputs[0].endian, Endian::BE);
    EXPECT_EQ(m.str(), kQpeMark);
    EXPECT_EQ(classify_io_type(m), IOType::Transform);
}

TEST(IOMark, RoundTripAndClassification) {
    struct Row {
        const char* text;
        IOType type;
    };
    const Row rows[] = {
        {"QRandom : (n) -> (r')", IOType::Classical},
        {"GenQInt : (n, x) -> (q:qs')", IOType::GenerateQuantum},
        {"GenMaxMix : (n) -> (q:qs')", IOType::GenerateQuantum},
        {"SwapTest : (n, sub:q:GenRho1, sub:q:GenRho2) -> (result')", IOType::DetectQuantum},
        {"Purity : (n, t, sub:q:GenRho) -> (isPure')", IOType::DetectQuantum},
        {"QFT : (n, q:qs) -> (q:qs'^BE)", IOType::Transform},
        {"Grover : (n, sub:q:OracleK) -> (q:qs')", IOType::Transform},
        {"QAdd : (n, q:qs1, q:qs2^LE) -> (q:qs1', q:qs2'^LE)", IOType::Transform},
        {"Empty : () -> ()", IOType::Classical},
    };
    for (const auto& r : rows) {
        auto m = parse_io_mark(r.text);
        EXPECT_EQ(format_io_mark(m), r.text);
        EXPECT_EQ(classify_io_type(m), r.type) << r.text;
        EXPECT_EQ(IOMark::parse(m.str()), m);
    }
    EXPECT_TRUE(IOMark::parse("QFT : (n, q:qs) -> (q:qs')").is_in_out("qs"));
    EXPECT_EQ(io_type_name(IOType::DetectQuantum), "detect-quantum");
}

TEST(IOMark, ParseErrorsCarryPosition) {
    try {
        IOMark::parse("QFT : (n, q:qs) -> (q:qs)");
        FAIL();
    } catch (const IOMarkError& e) {
        EXPECT_EQ(e.position, 24u);
    }
    EXPECT_THROW(IOMark::parse("QFT (n) -> (r')"), IOMarkError);
    EXPECT_THROW(IOMark::parse("F : (n^BE) -> (r')"), IOMarkError);
    EXPECT_THROW(IOMark::parse("F : (q:a^XE) -> (r')"), IOMarkError);
    EXPECT_THROW(IOMark::parse("F : (a') -> (r')"), IOMarkError);
    EXPECT_THROW(IOMark::parse("F : (a, a) -> (r')"), IOMarkError);
    EXPECT_THROW(IOMark::parse("F : (a) -> (r') x"), IOMarkError);
}

// ---------------------------------------------------------------- partitions

TEST(Combine, Examples) {
    Partition n{"n", {{"1", {I(1)}, {}}, {"2", {I(2)}, {}}, {">=3", {I(7)}, {}}}};
    Partition qs{"qs", {{"C", {}, GeneratorSpec::parse("sample(kind=CI, n=3)")},
                        {"S", {}, GeneratorSpec::parse("sample(kind=CSI, n=3)")}}};
    auto acoc = combine({n, qs}, Criterion::ACoC);
    EXPECT_EQ(acoc.size(), 6u);
    EXPECT_EQ(acoc.front(), (ClassTuple{0, 0}));
    EXPECT_EQ(acoc[1], (ClassTuple{0, 1}));
    EXPECT_EQ(acoc.back(), (ClassTuple{2, 1}));

    std::vector<Partition> four;
    for (const char* v : {"Nclock", "Ntarget", "Upower", "target"}) four.push_back({v, {{"a", {I(0)}, {}}, {"b", {I(1)}, {}}}});
    EXPECT_EQ(combine(four, Criterion::ECC).size(), 2u);
    EXPECT_EQ(combine(four, Criterion::ACoC).size(), 16u);

    for (auto c : {Criterion::ACoC, Criterion::ECC}) {
        auto single = combine({n}, c);
        ASSERT_EQ(single.size(), 3u);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(single[i], ClassTuple{i});
    }
    EXPECT_THROW(combine({}, Criterion::ACoC), CaseError);
    EXPECT_THROW(combine({Partition{"x", {}}}, Criterion::ECC), CaseError);
    EXPECT_THROW((Partition{"x", {{"a", {I(0)}, {}}, {"a", {I(1)}, {}}}}.validate()), CaseError);
    EXPECT_THROW((Partition{"x", {{"a", {}, {}}}}.validate()), CaseError);
}

TEST(Combine, CardinalityAndCoverageProperty) {
    std::mt19937_64 eng(5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Partition> ps(1 + eng() % 4);
        std::size_t product = 1, largest = 0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            ps[i].variable = "v" + std::to_string(i);
            std::size_t k = 1 + eng() % 4;
            for (std::size_t c = 0; c < k; ++c) ps[i].classes.push_back({"c" + std::to_string(c), {I(0)}, {}});
            product *= k;
            largest = std::max(largest, k);
        }
        auto acoc = combine(ps, Criterion::ACoC);
        auto ecc = combine(ps, Criterion::ECC);
        EXPECT_EQ(acoc.size(), product);
        EXPECT_EQ(ecc.size(), largest);
        EXPECT_EQ(std::set<ClassTuple>(acoc.begin(), acoc.end()).size(), product);
        for (const auto* rows : {&acoc, &ecc})
            for (std::size_t i = 0; i < ps.size(); ++i) {
                std::set<std::size_t> seen;
                for (const auto& t : *rows) seen.insert(t[i]);
                EXPECT_EQ(seen.size(), ps[i].classes.size());
            }
    }
}

// ---------------------------------------------------------------- expectations and cases

TEST(Expectation, ParseAndPrint) {
    for (const char* t : {"23", "true", "0.5", "approx(0.5, 0.1)", "range(0, 31)", "dist([0, 0.75], [1, 0.25])",
                          "freq(3, 0.9)", "state(ket_x(n=3, x=5))", "qft(j=3)", "differs(two_value(n=2, x=0, y=3))",
                          "overlap(qft(j=1), 0.5)", "overlap(ket_x(n=1, x=0), 1)"}) {
        auto e = Expectation::parse(t);
        EXPECT_EQ(e.str(), t);
        EXPECT_EQ(Expectation::parse(e.str()).str(), e.str());
    }
    EXPECT_TRUE(Expectation::parse("qft(j=3)").quantum_only());
    EXPECT_FALSE(Expectation::parse("range(0, 3)").quantum_only());
    EXPECT_THROW(Expectation::parse("dist([0, 0.5])"), CaseError);
    EXPECT_THROW(Expectation::parse("state(sample(kind=CI, n=2))"), CaseError);
    EXPECT_THROW(Expectation::parse("wobble(1)"), CaseError);
    EXPECT_THROW(Expectation::parse("abc"), CaseError);
    EXPECT_THROW(Expectation::parse("range(3, 1)"), CaseError);
}

TEST(TestCase, ConstructionEnforcesGenerators) {
    CaseSpec cs;
    cs.name = "missing";
    cs.classical_inputs["n"] = I(2);
    EXPECT_THROW(make_case("QFT : (n, q:qs) -> (q:qs')", cs), CaseError);
    cs.quantum_inputs.emplace("qs", GeneratorSpec::parse("ket_x(n=2, x=1)"));
    EXPECT_NO_THROW(make_case("QFT : (n, q:qs) -> (q:qs')", cs));

    CaseSpec bad = cs;
    bad.expected_classical.emplace("qs", Expectation::parse("3"));
    EXPECT_THROW(make_case("QFT : (n, q:qs) -> (q:qs')", bad), CaseError);
    bad = cs;
    bad.expected_quantum.emplace("zz", Expectation::parse("3"));
    EXPECT_THROW(make_case("QFT : (n, q:qs) -> (q:qs')", bad), CaseError);
    bad = cs;
    bad.repetitions = 0;
    EXPECT_THROW(make_case("QFT : (n, q:qs) -> (q:qs')", bad), CaseError);

    CaseSpec rnd;
    rnd.name = "r";
    rnd.classical_inputs["n"] = I(5);
    rnd.expected_classical.emplace("r", Expectation::parse("qft(j=1)"));
    EXPECT_THROW(make_case("QRandom : (n) -> (r')", rnd), CaseError);
    CaseSpec no_n;
    no_n.name = "x";
    EXPECT_THROW(make_case("QRandom : (n) -> (r')", no_n), CaseError);
    CaseSpec no_sub;
    no_sub.name = "s";
    no_sub.classical_inputs["n"] = I(1);
    EXPECT_THROW(make_case("SwapTest : (n, sub:q:G1, sub:q:G2) -> (result')", no_sub), CaseError);
}

TEST(RunCase, QftSingleQubit) {
    Library lib = bench();
    Rng rng(1);
    CaseSpec cs;
    cs.name = "n=1,C";
    cs.classical_inputs["n"] = I(1);
    cs.quantum_inputs.emplace("qs", GeneratorSpec::parse("ket_x(n=1, x=0)"));
    cs.expected_quantum.emplace("qs", Expectation::parse("qft(j=0)"));
    cs.repetitions = 20;
    auto v = run_case(lib, make_case("QFT : (n, q:qs) -> (q:qs'^BE)", cs), rng);
    EXPECT_TRUE(v.passed) << v.witness.value_or("");
    EXPECT_EQ(v.shots, 20);
}

TEST(RunCase, QftClassicalInputsAllJ) {
    Library lib = bench();
    Rng rng(2);
    for (int n = 1; n <= 4; ++n)
        for (int j = 0; j < (1 << n); ++j) {
            CaseSpec cs;
            cs.name = "j";
            cs.classical_inputs["n"] = I(n);
            cs.quantum_inputs.emplace("qs", GeneratorSpec::parse("ket_x(n=" + std::to_string(n) + ", x=" + std::to_string(j) + ")"));
            cs.expected_quantum.emplace("qs", Expectation::parse("qft(j=" + std::to_string(j) + ")"));
            cs.repetitions = 8;
            EXPECT_TRUE(run_case(lib, make_case("QFT : (n, q:qs) -> (q:qs')", cs), rng).passed) << n << " " << j;
        }
}

TEST(RunCase, QftSuperpositionOverlap) {
    Library lib = bench();
    Rng rng(3);
    auto mk = [](const std::string& exp) {
        CaseSpec cs;
        cs.name = "n=2,S";
        cs.classical_inputs["n"] = I(2);
        cs.quantum_inputs.emplace("qs", GeneratorSpec::parse("two_value(n=2, x=0, y=3)"));
        cs.expected_quantum.emplace("qs", Expectation::parse(exp));
        cs.repetitions = 400;
        return make_case("QFT : (n, q:qs) -> (q:qs')", cs);
    };
    EXPECT_TRUE(run_case(lib, mk("overlap(qft(j=0), 0.5)"), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("overlap(qft(j=3), 0.5)"), rng).passed);
    auto v = run_case(lib, mk("overlap(qft(j=1), 0.5)"), rng);
    EXPECT_FALSE(v.passed);
    EXPECT_NE(v.witness->find("all-zero in 0 of 400"), std::string::npos);
}

TEST(RunCase, GenQIntMeasuresX) {
    Library lib = bench();
    Rng rng(4);
    CaseSpec cs;
    cs.name = "n=6,x=23";
    cs.classical_inputs = {{"n", I(6)}, {"x", I(23)}};
    cs.expected_quantum.emplace("qs", Expectation::parse("23"));
    cs.repetitions = 5;
    const char* mark = "GenQInt : (n, x) -> (q:qs')";
    EXPECT_TRUE(run_case(lib, make_case(mark, cs), rng).passed);

    cs.expected_quantum.clear();
    cs.expected_quantum.emplace("qs", Expectation::parse("state(ket_x(n=6, x=23))"));
    EXPECT_TRUE(run_case(lib, make_case(mark, cs), rng).passed);

    cs.expected_quantum.clear();
    cs.expected_quantum.emplace("qs", Expectation::parse("22"));
    auto v = run_case(lib, make_case(mark, cs), rng);
    EXPECT_FALSE(v.passed);
    EXPECT_EQ(*v.witness, "rep 0: qs=23 expected 22");
    EXPECT_EQ(v.shots, 5);

    // little-endian reading of the same register
    cs.expected_quantum.clear();
    cs.expected_quantum.emplace("qs", Expectation::parse("58"));
    EXPECT_TRUE(run_case(lib, make_case("GenQInt : (n, x) -> (q:qs'^LE)", cs), rng).passed);
}

TEST(RunCase, PhaseFlipTypes) {
    Library lib = bench();
    Rng rng(5);
    const char* mark = "PhaseFlip : (n, q:qs) -> (q:qs')";
    auto mk = [&](const std::string& in, const std::string& exp) {
        CaseSpec cs;
        cs.name = in;
        cs.classical_inputs["n"] = I(3);
        cs.quantum_inputs.emplace("qs", GeneratorSpec::parse(in));
        cs.expected_quantum.emplace("qs", Expectation::parse(exp));
        cs.repetitions = 30;
        return make_case(mark, cs);
    };
    // basis inputs and superpositions avoiding |000> only pick up a global phase
    EXPECT_TRUE(run_case(lib, mk("ket_x(n=3, x=0)", "state(ket_x(n=3, x=0))"), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("ket_x(n=3, x=5)", "state(ket_x(n=3, x=5))"), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("two_value(n=3, x=1, y=6)", "state(two_value(n=3, x=1, y=6))"), rng).passed);
    // superposition with |000>: the relative phase flips
    EXPECT_TRUE(run_case(lib, mk("two_value(n=3, x=0, y=5)", "differs(two_value(n=3, x=0, y=5))"), rng).passed);
    EXPECT_FALSE(run_case(lib, mk("two_value(n=3, x=0, y=5)", "state(two_value(n=3, x=0, y=5))"), rng).passed);
    EXPECT_FALSE(run_case(lib, mk("ket_x(n=3, x=5)", "differs(ket_x(n=3, x=5))"), rng).passed);
}

TEST(RunCase, ClassicalRangeAndDistribution) {
    Library lib = bench();
    Rng rng(6);
    const char* mark = "QRandom : (n) -> (r')";
    CaseSpec cs;
    cs.name = "n=5";
    cs.classical_inputs["n"] = I(5);
    cs.widths["qs"] = 5;
    cs.expected_classical.emplace("r", Expectation::parse("range(0, 31)"));
    cs.repetitions = 200;
    // width comes from the declared length, the widths entry is ignored
    EXPECT_TRUE(run_case(lib, make_case(mark, cs), rng).passed);

    CaseSpec d;
    d.name = "n=2";
    d.classical_inputs["n"] = I(2);
    d.expected_classical.emplace("r", Expectation::parse("dist([0, 0.25], [1, 0.25], [2, 0.25], [3, 0.25])"));
    d.repetitions = 2000;
    auto v = run_case(lib, make_case(mark, d), rng);
    EXPECT_TRUE(v.passed) << v.witness.value_or("");
    EXPECT_EQ(v.shots, 2000);
    EXPECT_GT(v.statistic, 0.01);

    d.expected_classical.clear();
    d.expected_classical.emplace("r", Expectation::parse("range(0, 2)"));
    EXPECT_FALSE(run_case(lib, make_case(mark, d), rng).passed);
}

TEST(RunCase, RepetitionCountIsExact) {
    Library lib = bench();
    Rng rng(7);
    for (int r : {1, 2, 17, 64}) {
        CaseSpec cs;
        cs.name = "count";
        cs.classical_inputs["n"] = I(1);
        cs.expected_classical.emplace("r", Expectation::parse("freq(0, 0)"));
        cs.repetitions = r;
        EXPECT_EQ(run_case(lib, make_case("QRandom : (n) -> (r')", cs), rng).shots, r);
    }
}

TEST(RunCase, FaultsBecomeFailures) {
    Library lib;
    lib.add(Subroutine{"Oob", {int_param("n"), qubits_param("qs", V("n"))}, {gate(GateKind::X, {at("qs", V("n"))})}, {}});
    Rng rng(8);
    CaseSpec cs;
    cs.name = "oob";
    cs.classical_inputs["n"] = I(2);
    cs.quantum_inputs.emplace("qs", GeneratorSpec::parse("ket_x(n=2, x=0)"));
    cs.repetitions = 3;
    auto v = run_case(lib, make_case("Oob : (n, q:qs) -> (q:qs')", cs), rng);
    EXPECT_FALSE(v.passed);
    EXPECT_EQ(v.shots, 3);
    EXPECT_NE(v.witness->find("fault index-out-of-range at Oob:0"), std::string::npos);
}

TEST(RunCase, SwapTestWithGeneratorHandles) {
    Library lib = bench();
    Rng rng(9);
    const char* mark = "SwapTest : (n, sub:q:G1, sub:q:G2) -> (result')";
    auto mk = [&](const std::string& g1, const std::string& g2, int n, double p0) {
        CaseSpec cs;
        cs.name = g1 + " vs " + g2;
        cs.classical_inputs["n"] = I(n);
        cs.subroutine_inputs.emplace("G1", HandleInput::parse(g1));
        cs.subroutine_inputs.emplace("G2", HandleInput::parse(g2));
        cs.expected_classical.emplace(
            "result", Expectation::parse(p0 == 1 ? std::string("0") : "dist([0, " + std::to_string(p0) + "], [1, " + std::to_string(1 - p0) + "])"));
        cs.repetitions = 2000;
        return make_case(mark, cs);
    };
    EXPECT_TRUE(run_case(lib, mk("ket_x(n=3, x=3)", "ket_x(n=3, x=6)", 3, 0.5), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("ket_x(n=4, x=9)", "ket_x(n=4, x=9)", 4, 1.0), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("ket_x(n=1, x=0)", "comp_sup(n=1, x=0, theta=0)", 1, 0.75), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("max_mixed(n=1)", "max_mixed(n=1)", 1, 0.75), rng).passed);
    EXPECT_TRUE(run_case(lib, mk("comp_sup(n=1, x=0, theta=0)", "max_mixed(n=1)", 1, 0.75), rng).passed);
    EXPECT_FALSE(run_case(lib, mk("ket_x(n=1, x=0)", "ket_x(n=1, x=1)", 1, 0.75), rng).passed);
}

// ---------------------------------------------------------------- reports

TEST(Report, SummaryAndFormats) {
    auto empty = suite_report({});
    EXPECT_EQ(empty.status(), "no cases");
    EXPECT_EQ(empty.to_json()["status"], "no cases");
    EXPECT_EQ(empty.to_csv(), "subroutine,case,verdict,shots,witness\n");

    std::vector<CaseRecord> recs{{"QFT", "a", {"case", "a", true, 10, 1.0, 0.01, {}}},
                                 {"QFT", "b,c", {"case", "b,c", false, 4, 0.0, 0.01, std::string("rep 0: qs=\"1\"")}},
                                 {"GenQInt", "z", {"case", "z", true, 1, 1.0, 0.01, {}}}};
    auto s = suite_report(recs);
    EXPECT_EQ(s.status(), "fail");
    EXPECT_EQ(s.passed, 2);
    EXPECT_EQ(s.failed, 1);
    EXPECT_EQ(*s.per_subroutine["QFT"].first_witness, "rep 0: qs=\"1\"");
    EXPECT_EQ(s.to_csv(),
              "subroutine,case,verdict,shots,witness\n"
              "QFT,a,pass,10,\n"
              "QFT,\"b,c\",fail,4,\"rep 0: qs=\"\"1\"\"\"\n"
              "GenQInt,z,pass,1,\n");
    auto j = s.to_json();
    EXPECT_EQ(j["subroutines"]["QFT"]["failed"], 1);
    EXPECT_EQ(j["cases"][1]["witness"], "rep 0: qs=\"1\"");

    recs.erase(recs.begin() + 1);
    auto ok = suite_report(recs);
    EXPECT_EQ(ok.status(), "pass");
    EXPECT_EQ(ok.failed, 0);
}

// ---------------------------------------------------------------- suite files

const char* kSuite = R"y(subroutine: QFT
mark: "QFT : (n, q:qs) -> (q:qs'^BE)"
criterion: ACoC
partitions:
  - variable: n
    classes:
      - {label: "n=1", values: [1]}
      - {label: "n=2", values: [2]}
  - variable: qs
    classes:
      - {label: C, generator: "sample(kind=CI, n=2)"}
      - {label: S, generator: "sample(kind=CSI, n=2)"}
cases:
  - name: "n=1,C"
    classes: ["n=1", C]
    inputs: {n: 1}
    quantum: {qs: "ket_x(n=1, x=0)"}
    expect: {qs: "qft(j=0)"}
    repetitions: 10
  - name: "n=2,S"
    classes: ["n=2", S]
    inputs: {n: 2}
    quantum: {qs: "two_value(n=2, x=0, y=3)"}
    expect: {qs: "overlap(qft(j=0), 0.5)"}
    repetitions: 200
---
subroutine: GenQInt
mark: "GenQInt : (n, x) -> (q:qs')"
cases:
  - name: x23
    inputs: {n: 6, x: 23}
    expect: {qs: "23"}
    repetitions: 3
)y";

TEST(Suite, ParseRunAndRoundTrip) {
    auto suite = Suite::from_yaml(kSuite);
    ASSERT_EQ(suite.docs.size(), 2u);
    EXPECT_EQ(suite.case_count(), 3u);
    EXPECT_EQ(suite.docs[0].coverage_gaps(), (std::vector<std::string>{"n=1,S", "n=2,C"}));
    EXPECT_TRUE(suite.docs[1].coverage_gaps().empty());

    auto again = Suite::from_yaml(suite.to_yaml());
    EXPECT_EQ(again.to_yaml(), suite.to_yaml());
    EXPECT_EQ(again.case_count(), 3u);

    Library lib = bench();
    auto recs = run_suite(suite, lib, 42);
    auto report = suite_report(recs);
    EXPECT_EQ(report.status(), "pass") << report.to_csv();
    EXPECT_EQ(report.passed, 3);
    EXPECT_EQ(recs[1].verdict.shots, 200);
    // same seed, same verdicts
    auto again_recs = run_suite(suite, lib, 42);
    EXPECT_EQ(suite_report(again_recs).to_csv(), report.to_csv());
}

TEST(Suite, Errors) {
    EXPECT_THROW(Suite::from_yaml("subroutine: X\nmark: \"X : (n) -> (r)\"\n"), CaseError);
    EXPECT_THROW(Suite::from_yaml("subroutine: X\nmark: \"X : (n) -> (r')\"\ncases:\n  - name: a\n"), CaseError);
    EXPECT_THROW(Suite::from_yaml("subroutine: X\nmark: \"X : (n) -> (r')\"\ncases:\n  - name: a\n    inputs: {n: 1}\n    expect: {zz: \"1\"}\n"),
                 CaseError);
    EXPECT_THROW(Suite::from_yaml("subroutine: [\n"), CaseError);
    const char* bad_label = R"y(subroutine: X
mark: "X : (n) -> (r')"
partitions:
  - variable: n
    classes:
      - {label: a, values: [1]}
cases:
  - name: c
    classes: [b]
    inputs: {n: 1}
)y";
    EXPECT_THROW(Suite::from_yaml(bad_label), CaseError);
    auto s = Suite::from_yaml("");
    EXPECT_EQ(s.case_count(), 0u);
    Library lib;
    EXPECT_EQ(suite_report(run_suite(s, lib, 1)).status(), "no cases");
    EXPECT_THROW(Suite::load("/nonexistent/file.suite"), CaseError);
}
