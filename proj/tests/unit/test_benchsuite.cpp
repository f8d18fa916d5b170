#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qtk/benchsuite/benchsuite.hpp"
#include "qtk/qir/validate.hpp"

using namespace qtk;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector ket(int n, std::uint64_t x) { return gen_ket_x(n, x).state(); }

// Runs a bound benchmark on `input` placed on io_in and returns the io_out state.
StateVector run_on(const Invocation& inv, const PreparedInput& input, std::uint64_t seed = 1) {
    StateVector s(inv.n_qubits);
    input.prepare(s, inv.io_in);
    Rng rng(seed);
    inv.run(s, rng);
    return extract_subsystem(s, inv.io_out);
}

std::uint64_t measure_out(const Invocation& inv, const PreparedInput& input) {
    StateVector s(inv.n_qubits);
    input.prepare(s, inv.io_in);
    Rng rng(3);
    inv.run(s, rng);
    auto bits = s.measure(inv.io_out, rng);
    std::uint64_t v = 0;
    for (int b : bits) v = 2 * v + static_cast<std::uint64_t>(b);
    return v;
}

}  // namespace

TEST(Catalog, EntriesAndClassification) {
    const auto& cat = catalog();
    EXPECT_EQ(cat.names(), (std::vector<std::string>{"QRandom", "GenQInt", "GenXPlusY", "GenMaxSup", "GenMaxMix", "SwapTest",
                                                     "Purity", "InnerProduct", "Empty", "Reverse", "MultiSWAP", "CRk",
                                                     "PhaseFlip", "Grover", "QFT", "QAdd", "Teleport", "QPE"}));
    EXPECT_EQ(cat.get("QFT").io_type, IOType::Transform);
    EXPECT_EQ(cat.get("SwapTest").io_type, IOType::DetectQuantum);
    EXPECT_EQ(cat.get("GenQInt").io_type, IOType::GenerateQuantum);
    EXPECT_EQ(cat.get("QRandom").io_type, IOType::Classical);
    EXPECT_EQ(cat.get("Grover").io_type, IOType::Transform);
    EXPECT_EQ(cat.get("QPE").io_type, IOType::Transform);
    EXPECT_THROW(cat.get("Shor"), BenchError);
    EXPECT_EQ(cat.find("Shor"), nullptr);

    for (const auto& e : cat.entries()) {
        EXPECT_EQ(e.subroutine->name, e.name);
        EXPECT_EQ(e.io_mark.program, e.name);
        EXPECT_EQ(e.default_suite.subroutine, e.name);
        EXPECT_EQ(e.default_suite.mark, e.io_mark) << e.name;
        EXPECT_FALSE(e.default_suite.cases.empty()) << e.name;
        EXPECT_TRUE(e.default_suite.coverage_gaps().empty()) << e.name;
    }
    for (const char* name : {"Empty", "Reverse", "MultiSWAP", "CRk", "PhaseFlip", "QFT", "QAdd", "Teleport"})
        EXPECT_TRUE(cat.get(name).oracle) << name;
    EXPECT_FALSE(cat.get("QRandom").has_quantum_input());
    EXPECT_FALSE(cat.get("SwapTest").has_quantum_input());
    EXPECT_TRUE(cat.get("QFT").has_quantum_input());
}

TEST(Catalog, LibraryValidates) {
    const auto& lib = catalog().library();
    for (const auto& name : lib.names()) {
        auto issues = validate(*lib.get(name), lib);
        EXPECT_TRUE(issues.empty()) << name;
    }
    EXPECT_EQ(lib.buggy_variants("QFT"), (std::vector<std::string>{"QFT_BILO"}));
    EXPECT_EQ(lib.buggy_variants("CRk"), (std::vector<std::string>{"CRk_bug"}));
}

TEST(Catalog, BindLayout) {
    const auto& cat = catalog();
    auto inv = cat.get("MultiSWAP").bind(3);
    EXPECT_EQ(inv.n_qubits, 6);
    EXPECT_EQ(inv.io_in, (std::vector<int>{0, 1, 2, 3, 4, 5}));
    auto tel = cat.get("Teleport").bind(7);
    EXPECT_EQ(tel.n_qubits, 3);
    EXPECT_EQ(tel.io_in, (std::vector<int>{0}));
    EXPECT_EQ(tel.io_out, (std::vector<int>{2}));
    auto qpe = cat.get("QPE").bind(4);
    EXPECT_EQ(qpe.n_qubits, 5);
    EXPECT_EQ(qpe.io_in, (std::vector<int>{4}));
    EXPECT_EQ(qpe.io_out, (std::vector<int>{0, 1, 2, 3}));
    auto sw = cat.get("SwapTest").bind(2);
    EXPECT_TRUE(sw.io_in.empty());
    EXPECT_TRUE(sw.io_out.empty());
}

TEST(SpecQft, Examples) {
    auto a = spec_qft(1, {1.0, 0.0});
    EXPECT_NEAR(a[0].real(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(a[1].real(), 1 / std::sqrt(2.0), 1e-12);

    // row j=1 of the 4x4 DFT: (1, i, -1, -i) / 2
    auto b = spec_qft(2, {0.0, 1.0, 0.0, 0.0});
    const std::vector<cplx> row{{0.5, 0}, {0, 0.5}, {-0.5, 0}, {0, -0.5}};
    for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(b[k] - row[k]), 1e-12) << k;

    EXPECT_THROW(spec_qft(7, std::vector<cplx>(128)), BenchError);
    EXPECT_THROW(spec_qft(2, {1.0}), BenchError);
}

TEST(SpecQft, MatchesBitwiseForm) {
    for (int n = 1; n <= 5; ++n)
        for (std::uint64_t j = 0; j < (1u << n); ++j) {
            auto dense = StateVector::from_amplitudes(spec_qft(n, ket(n, j).amplitudes()));
            auto prod = spec_qft_bitwise(n, j);
            EXPECT_NEAR(std::abs(dense.inner(prod) - cplx{1.0}), 0.0, 1e-9) << n << " " << j;
        }
}

TEST(SpecSwapTest, TableRows) {
    auto d = [](const StateVector& s) { return DensityMatrix::pure(s); };
    EXPECT_NEAR(spec_swap_test(d(ket(3, 3)), d(ket(3, 6))), 0.5, 1e-12);
    EXPECT_NEAR(spec_swap_test(d(ket(4, 9)), d(ket(4, 9))), 1.0, 1e-12);
    EXPECT_NEAR(spec_swap_test(d(ket(1, 0)), d(gen_pauli({3}).state())), 0.75, 1e-12);
    auto mixed = DensityMatrix::mixture({{0.5, ket(1, 0)}, {0.5, ket(1, 1)}});
    EXPECT_NEAR(spec_swap_test(mixed, mixed), 0.75, 1e-12);
    EXPECT_THROW(spec_swap_test(d(ket(1, 0)), d(ket(2, 0))), BenchError);
}

TEST(PhaseOracle, FlipsOnlyMarkedState) {
    Library lib;
    for (int n = 1; n <= 4; ++n)
        for (std::uint64_t K = 0; K < (1u << n); ++K) {
            auto sub = make_phase_oracle(n, K);
            EXPECT_TRUE(is_valid(sub, lib)) << sub.name;
            EXPECT_EQ(sub.name, "PhaseOracle_" + std::to_string(n) + "_" + std::to_string(K));
            auto inv = bind_auto(lib, std::make_shared<const Subroutine>(sub), {});
            StateVector s = gen_pauli(std::vector<int>(n, 3)).state();
            Rng rng(1);
            inv.run(s, rng);
            for (std::uint64_t x = 0; x < (1u << n); ++x) {
                double sign = x == K ? -1.0 : 1.0;
                EXPECT_NEAR(std::abs(s.amplitude(x) - sign * std::pow(2.0, -n / 2.0)), 0.0, 1e-12) << n << K << x;
            }
            inv.run(s, rng);
            EXPECT_NEAR(s.fidelity(gen_pauli(std::vector<int>(n, 3)).state()), 1.0, 1e-12);
        }
    EXPECT_THROW(make_phase_oracle(2, 4), BenchError);
    EXPECT_THROW(make_phase_oracle(0, 0), BenchError);
}

TEST(Grover, FindsMarkedStateWithHighProbability) {
    const auto& lib = catalog().library();
    for (int n : {3, 4})
        for (std::uint64_t K : {0u, 5u, 6u}) {
            auto oracle = std::make_shared<const Subroutine>(make_phase_oracle(n, K));
            auto inv = bind_auto(lib, lib.get("Grover"), {{"n", Value{std::int64_t{n}}}}, {{"OracleK", Handle{oracle, {}}}});
            StateVector s(inv.n_qubits);
            Rng rng(1);
            inv.run(s, rng);
            auto dist = s.distribution(iota_qubits(0, n));
            EXPECT_GT(dist[K], 0.9) << n << " " << K;
        }
}

TEST(Qpe, PublishedDistributions) {
    const auto& lib = catalog().library();
    auto x = qpe_distribution(3, Handle{lib.get("XPower"), {}}, gen_pauli({4}));
    EXPECT_NEAR(x[4], 1.0, 1e-9);

    // The phases of H are 0 and 1/2, so only 000 and 100 can appear.
    auto h = qpe_distribution(3, Handle{lib.get("HPower"), {}}, gen_ket_x(1, 0));
    EXPECT_NEAR(h[0], 0.8535533905932737, 1e-9);
    EXPECT_NEAR(h[4], 0.14644660940672624, 1e-9);
    EXPECT_NEAR(h[7], 0.0, 1e-9);

    auto c = qpe_distribution(3, Handle{lib.get("CSSdgPower"), {}}, gen_ket_x(3, 5));
    EXPECT_NEAR(c[6], 1.0, 1e-9);

    auto sup = qpe_distribution(3, Handle{lib.get("CSSdgPower"), {}}, gen_two_value(3, 5, 6, 0.0));
    EXPECT_NEAR(sup[6], 0.5, 1e-9);
    EXPECT_NEAR(sup[2], 0.5, 1e-9);

    // Rz(2pi/3) on a |0> target gives phase -1/6, i.e. 5/6; 7 clock qubits peak at round(128 * 5/6) = 107
    auto rz = qpe_distribution(7, Handle{lib.get("CRzPower"), {}}, gen_ket_x(2, 2));
    double peak = 0;
    std::uint64_t arg = 0;
    for (auto [k, p] : rz)
        if (p > peak) peak = p, arg = k;
    EXPECT_EQ(arg, 107u);
    EXPECT_GT(peak, 0.5);
}

TEST(Oracles, TransformBenchmarksAgreeOnBasisInputs) {
    for (const auto& e : catalog().entries()) {
        if (!e.oracle) continue;
        std::vector<int> scales{1, 2, 3, 4, 5};
        if (e.name == "Teleport") scales = {1};
        if (e.name == "MultiSWAP" || e.name == "QAdd") scales = {1, 2, 3};
        for (int n : scales) {
            auto inv = e.bind(n);
            const int w = static_cast<int>(inv.io_in.size());
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << w); ++x) {
                auto out = run_on(inv, gen_ket_x(w, x));
                auto want = e.oracle(n, ket(w, x));
                EXPECT_GT(out.fidelity(want), 1 - 1e-9) << e.name << " n=" << n << " x=" << x;
            }
        }
    }
}

TEST(Oracles, TransformBenchmarksAgreeOnSuperpositions) {
    Rng rng(17);
    for (const auto& e : catalog().entries()) {
        if (!e.oracle) continue;
        for (int n : {1, 2, 3}) {
            auto inv = e.bind(n);
            const int w = static_cast<int>(inv.io_in.size());
            for (InputKind kind : {InputKind::CSI, InputKind::PAULI})
                for (int t = 0; t < 4; ++t) {
                    auto in = sample_input(kind, w, rng);
                    auto out = run_on(inv, in);
                    EXPECT_GT(out.fidelity(e.oracle(n, in.state())), 1 - 1e-9) << e.name << " n=" << n << " " << in.description();
                }
        }
    }
}

TEST(Oracles, ScaleCap) {
    const auto& e = catalog().get("Reverse");
    EXPECT_THROW(e.oracle(7, StateVector(7)), BenchError);
    EXPECT_NO_THROW(catalog().get("MultiSWAP").oracle(6, StateVector(12)));
}

TEST(QAdd, ExhaustiveModularAddition) {
    const auto& e = catalog().get("QAdd");
    for (int n = 1; n <= 4; ++n) {
        auto inv = e.bind(n);
        const std::uint64_t N = std::uint64_t{1} << n;
        for (std::uint64_t x = 0; x < N; ++x)
            for (std::uint64_t y = 0; y < N; ++y) {
                auto got = measure_out(inv, gen_ket_x(2 * n, (x << n) | y));
                EXPECT_EQ(got, (x << n) | ((x + y) % N)) << n << " " << x << "+" << y;
            }
    }
}

TEST(Reverse, TableRows) {
    const auto& e = catalog().get("Reverse");
    EXPECT_EQ(measure_out(e.bind(1), gen_ket_x(1, 1)), 1u);
    EXPECT_EQ(measure_out(e.bind(5), gen_ket_x(5, 0b11001)), 0b10011u);
    EXPECT_EQ(measure_out(e.bind(6), gen_ket_x(6, 0b010011)), 0b110010u);
}

TEST(PhaseFlip, InputTypes) {
    const auto& e = catalog().get("PhaseFlip");
    auto inv = e.bind(5);
    // types I, II: basis states unchanged up to phase
    EXPECT_NEAR(run_on(inv, gen_ket_x(5, 0)).fidelity(ket(5, 0)), 1.0, 1e-12);
    EXPECT_NEAR(run_on(inv, gen_ket_x(5, 13)).fidelity(ket(5, 13)), 1.0, 1e-12);
    // type III: |0> with a nonzero partner becomes orthogonal
    auto three = gen_two_value(5, 0, 25, 0.0);
    EXPECT_NEAR(run_on(inv, three).fidelity(three.state()), 0.0, 1e-12);
    // type IV: two nonzero values share the flip
    auto four = gen_two_value(5, 6, 9, 0.0);
    EXPECT_NEAR(run_on(inv, four).fidelity(four.state()), 1.0, 1e-12);
}

TEST(Teleport, IdentityOverPauliInputs) {
    Rng rng(5);
    auto v = identity_check(catalog().get("Teleport").bind(1), 60, {InputKind::PAULI}, rng);
    EXPECT_TRUE(v.passed) << v.witness.value_or("");
}

TEST(ExtractSubsystem, ProductAndEntangled) {
    auto s = ket(1, 1).tensor(gen_pauli({3}).state()).tensor(ket(1, 0));
    auto mid = extract_subsystem(s, {1});
    EXPECT_NEAR(mid.fidelity(gen_pauli({3}).state()), 1.0, 1e-12);
    auto outer = extract_subsystem(s, {2, 0});
    EXPECT_NEAR(outer.fidelity(ket(2, 1)), 1.0, 1e-12);
    auto bell = gen_two_value(2, 0, 3, 0.0).state();
    EXPECT_THROW(extract_subsystem(bell, {0}), BenchError);
}

TEST(DefaultSuites, AllPassAndRoundTrip) {
    Suite all = catalog().default_suites();
    ASSERT_EQ(all.docs.size(), 18u);
    auto report = suite_report(run_suite(all, catalog().library(), 2024));
    EXPECT_EQ(report.status(), "pass") << report.to_csv();
    for (const auto& [name, per] : report.per_subroutine) EXPECT_EQ(per.failed, 0) << name;

    auto again = Suite::from_yaml(all.to_yaml());
    EXPECT_EQ(again.to_yaml(), all.to_yaml());
    EXPECT_EQ(again.case_count(), all.case_count());
}

TEST(DefaultSuites, BuggyVariantsFail) {
    const auto& lib = catalog().library();
    Library bugged = lib;
    auto swap_in = [&](const std::string& base, const std::string& variant) {
        Subroutine s = *lib.get(variant);
        s.name = base;
        bugged.add(s);
    };
    swap_in("Reverse", "Reverse_bug");
    swap_in("QFT", "QFT_BILO");
    Suite s;
    s.docs = {catalog().get("Reverse").default_suite, catalog().get("QFT").default_suite};
    auto report = suite_report(run_suite(s, bugged, 7));
    EXPECT_GT(report.per_subroutine["Reverse"].failed, 0);
    EXPECT_GT(report.per_subroutine["QFT"].failed, 0);
}
