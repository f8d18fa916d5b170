// Acceptance run: one line per criterion, tolerances fixed below.
// Exit status is 0 when every criterion passes or fails only in a known way
// (listed with its analysis), 1 otherwise. --strict makes any red line fatal.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qtk/harness/harness.hpp"
#include "qtk/qir/variants.hpp"

using namespace qtk;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
    std::vector<std::string> analysis;
    bool known_red = false;
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

StateVector basis(int n, std::uint64_t x) {
    std::vector<cplx> a(std::size_t{1} << n);
    a[x] = 1.0;
    return StateVector::from_amplitudes(a);
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Amplitude distance after removing the global phase of b relative to a.
double phase_free_diff(const StateVector& a, const StateVector& b) {
    cplx ip = b.inner(a);
    cplx ph = std::abs(ip) > 0 ? ip / std::abs(ip) : cplx{1.0};
    auto bb = b.amplitudes();
    for (auto& c : bb) c *= ph;
    return max_diff(a.amplitudes(), bb);
}

std::uint64_t to_int(const std::vector<int>& bits) {
    std::uint64_t v = 0;
    for (int b : bits) v = 2 * v + static_cast<std::uint64_t>(b);
    return v;
}

// ------------------------------------------------------------------ criteria

Outcome bell() {
    StateVector s(2);
    std::vector<int> q0{0}, q01{0, 1};
    s.apply(Gate(GateKind::H), q0);
    s.apply(Gate(GateKind::CNOT), q01);
    const double h = 1 / std::sqrt(2.0);
    double err = max_diff(s.amplitudes(), {h, 0.0, 0.0, h});
    return {err <= 1e-12, "max amplitude error " + fmt(err) + " (tol 1e-12)"};
}

Outcome qft_fidelity() {
    const auto& e = catalog().get("QFT");
    double worst = 0;
    int cases = 0;
    for (int n = 1; n <= 6; ++n) {
        auto inv = e.bind(n);
        for (std::uint64_t j = 0; j < (1u << n); ++j) {
            StateVector s(inv.n_qubits);
            gen_ket_x(n, j).prepare(s, inv.io_in);
            Rng rng(j);
            inv.run(s, rng);
            auto out = extract_subsystem(s, inv.io_out);
            auto want = StateVector::from_amplitudes(spec_qft(n, basis(n, j).amplitudes()));
            worst = std::max(worst, 1.0 - out.fidelity(want));
            ++cases;
        }
    }
    return {worst <= 1e-10, std::to_string(cases) + " inputs, n 1..6, worst fidelity deficit " + fmt(worst) + " (tol 1e-10)"};
}

Outcome qft_output() {
    const auto& e = catalog().get("QFT");
    const auto& lib = catalog().library();
    int false_alarms = 0, cases = 0;
    Rng rng(31);
    for (int n = 1; n <= 5; ++n) {
        auto inv = e.bind(n);
        for (std::uint64_t j = 0; j < (1u << n); ++j) {
            StateVector s(inv.n_qubits);
            gen_ket_x(n, j).prepare(s, inv.io_in);
            inv.run(s, rng);
            if (!qft_output_check(j, n, s, rng, 100, inv.io_out).passed) ++false_alarms;
            ++cases;
        }
    }

    // QFT_BILO at n = 2: single-shot failure rate tracks 1 - F per input.
    const int n = 2, shots = 2000;
    auto good = e.bind(n);
    auto bad = good.with_sub(lib.get(lib.buggy_variants("QFT").at(0)));
    double worst_gap = 0;
    int caught = 0;
    for (std::uint64_t j = 0; j < 4; ++j) {
        StateVector s(bad.n_qubits);
        gen_ket_x(n, j).prepare(s, bad.io_in);
        bad.run(s, rng);
        auto want = StateVector::from_amplitudes(spec_qft(n, basis(n, j).amplitudes()));
        const double F = extract_subsystem(s, bad.io_out).fidelity(want);
        int fails = 0;
        for (int t = 0; t < shots; ++t)
            if (!qft_output_check(j, n, s, rng, 1, bad.io_out).passed) ++fails;
        worst_gap = std::max(worst_gap, std::abs(fails / double(shots) - (1 - F)));
        if (fails > 0) ++caught;
    }
    bool pass = false_alarms == 0 && worst_gap <= 0.05 && caught >= 1;
    return {pass, std::to_string(false_alarms) + "/" + std::to_string(cases) + " false alarms on QFT (100 shots each); " +
                      "buggy QFT caught on " + std::to_string(caught) + "/4 inputs, worst |rate - (1-F)| " + fmt(worst_gap) +
                      " (tol 0.05)"};
}

Outcome variants() {
    const auto& lib = catalog().library();
    int checked = 0;
    std::vector<std::string> failures;
    for (const char* name : {"Empty", "Reverse", "MultiSWAP", "CRk", "PhaseFlip", "QFT", "QAdd", "QPE"}) {
        const auto& e = catalog().get(name);
        for (int n = 1; n <= 5; ++n) {
            auto inv = e.bind(n);
            inv.io_in = inv.io_out = iota_qubits(0, inv.n_qubits);
            Rng rng = Rng(Rng::derive(41, {Rng::hash(name), static_cast<std::uint64_t>(n)}));
            try {
                auto v = variant_checks(inv, {}, 50, rng, {InputKind::STV});
                if (!v.passed) failures.push_back(std::string(name) + "/" + std::to_string(n) + ": " + v.witness.value_or(""));
            } catch (const std::exception& ex) {
                failures.push_back(std::string(name) + "/" + std::to_string(n) + ": " + ex.what());
            }
            ++checked;
        }
    }

    auto qft = catalog().get("QFT").bind(3);
    qft.io_in = qft.io_out = iota_qubits(0, qft.n_qubits);
    Subroutine broken = inverse_of(*qft.sub, lib);
    broken.body.erase(broken.body.begin());
    Rng rng(43);
    VariantSet vs;
    vs.inverse = std::make_shared<const Subroutine>(broken);
    bool caught = !variant_checks(qft, vs, 10, rng, {InputKind::STV}).passed;

    Outcome o{failures.empty() && caught,
              std::to_string(checked - static_cast<int>(failures.size())) + "/" + std::to_string(checked) +
                  " benchmark scales pass inverse, power and controlled checks on 50 random states; corrupted QFT inverse " +
                  (caught ? "caught" : "missed") + " within 10 trials"};
    for (const auto& f : failures) o.analysis.push_back(f);
    return o;
}

Outcome swap_test() {
    const auto& lib = catalog().library();
    struct Case {
        int n;
        const char* g1;
        const char* g2;
        double p0;
    };
    const std::vector<Case> cases{{3, "ket_x(n=3, x=3)", "ket_x(n=3, x=6)", 0.5},
                                  {4, "ket_x(n=4, x=9)", "ket_x(n=4, x=9)", 1.0},
                                  {1, "ket_x(n=1, x=0)", "pauli(3)", 0.75},
                                  {1, "max_mixed(n=1)", "max_mixed(n=1)", 0.75},
                                  {1, "pauli(3)", "max_mixed(n=1)", 0.75}};
    const int shots = 10000;
    Rng rng(51);
    double worst = 0;
    std::string seen;
    for (const auto& c : cases) {
        std::map<std::string, Handle> handles{
            {"GenRho1", Handle{std::make_shared<const Subroutine>(GeneratorSpec::parse(c.g1).to_subroutine("GenRho1", rng)), {}}},
            {"GenRho2", Handle{std::make_shared<const Subroutine>(GeneratorSpec::parse(c.g2).to_subroutine("GenRho2", rng)), {}}}};
        auto inv = bind_auto(lib, lib.get("SwapTest"), {{"n", Value{std::int64_t{c.n}}}}, handles);
        int zeros = 0;
        for (int t = 0; t < shots; ++t) {
            StateVector s(inv.n_qubits);
            auto out = inv.run(s, rng);
            if (as_int(out.at("result"), "result") == 0) ++zeros;
        }
        const double p0 = zeros / double(shots);
        worst = std::max(worst, std::abs(p0 - c.p0));
        seen += (seen.empty() ? "" : ", ") + fmt(p0);
    }
    return {worst <= 0.02, "p0 = {" + seen + "} vs {0.5, 1, 0.75, 0.75, 0.75}, worst error " + fmt(worst) + " (tol 0.02)"};
}

std::map<std::uint64_t, int> qpe_shots(const char* power, const PreparedInput& target, int shots, Rng& rng) {
    const auto& lib = catalog().library();
    auto inv = bind_auto(lib, lib.get("QPE"),
                         {{"Nclock", Value{std::int64_t{3}}}, {"Ntarget", Value{std::int64_t{target.n_qubits()}}}},
                         {{"Upower", Handle{lib.get(power), {}}}});
    const auto clock = iota_qubits(0, 3);
    std::map<std::uint64_t, int> counts;
    for (int t = 0; t < shots; ++t) {
        StateVector s(inv.n_qubits);
        target.prepare(s, iota_qubits(3, target.n_qubits()));
        inv.run(s, rng);
        ++counts[to_int(s.measure(clock, rng))];
    }
    return counts;
}

Outcome qpe() {
    Rng rng(61);
    auto a = qpe_shots("XPower", gen_pauli({4}), 1000, rng);
    auto c = qpe_shots("CSSdgPower", gen_ket_x(3, 5), 1000, rng);
    const int nb = 4000;
    auto b = qpe_shots("HPower", gen_ket_x(1, 0), nb, rng);
    const double pa = a[4] / 1000.0, pc = c[6] / 1000.0;
    const double p000 = b[0] / double(nb), p111 = b[7] / double(nb), p100 = b[4] / double(nb);
    const bool ok_a = pa >= 0.99, ok_c = pc >= 0.99;
    const bool ok_000 = std::abs(p000 - 0.8536) <= 0.02, ok_111 = std::abs(p111 - 0.1464) <= 0.02;

    Outcome o;
    o.pass = ok_a && ok_c && ok_000 && ok_111;
    o.detail = "(a) X, |->: P(100) " + fmt(pa) + " (>= 0.99); (b) H, |0>: P(000) " + fmt(p000) + " (0.8536 +- 0.02), P(111) " +
               fmt(p111) + " (0.1464 +- 0.02); (c) CS.Sdg, |101>: P(110) " + fmt(pc) + " (>= 0.99)";
    if (!ok_111) {
        o.analysis = {
            "(b) P(111) cannot reach 0.1464. H has eigenvalues +1 and -1, i.e. phases 0 and 1/2,",
            "so a 3-qubit clock can only read 000 or 100 (or 000 and 001 in little-endian order).",
            "|0> = cos(pi/8)|h+> + sin(pi/8)|h->, giving P(000) = cos^2(pi/8) = 0.8536 and",
            "P(100) = sin^2(pi/8) = 0.1464. Observed P(100) = " + fmt(p100) + "; the 0.1464 mass sits on 100, not 111.",
        };
        o.known_red = ok_a && ok_c && ok_000 && std::abs(p100 - 0.1464) <= 0.02;
    }
    return o;
}

Outcome mm_invisible() {
    auto cfg = ExperimentConfig::parse(
        "benchmarks = Empty, Reverse, MultiSWAP\nscale.Empty = 10\nscale.Reverse = 8\nscale.MultiSWAP = 6\n"
        "kinds = MM\ninputs = CI\nlimit = 10\nseed = 2024\n");
    cfg.validate();
    auto rep = run_experiment(cfg);
    std::map<std::string, int> mutants;
    std::int64_t trials = 0, triggers = 0;
    for (const auto& r : rep.rows) {
        mutants[r.benchmark] += r.mutants;
        trials += r.trials;
        triggers += r.triggers;
    }
    bool all_zero = std::all_of(rep.outcomes.begin(), rep.outcomes.end(), [](const MutantOutcome& m) { return m.triggers == 0; });
    bool covered = mutants.size() == 3;
    std::string per;
    for (auto& [b, m] : mutants) per += (per.empty() ? "" : ", ") + b + " " + std::to_string(m);
    return {all_zero && covered && !rep.outcomes.empty(),
            "MM mutants (" + per + ") under CI: " + std::to_string(triggers) + " triggers in " + std::to_string(trials) +
                " trials (want 0)"};
}

Outcome scaq() {
    auto sup = [](std::uint64_t a, std::uint64_t b) {
        std::vector<cplx> v(8);
        v[a] = v[b] = 1 / std::sqrt(2.0);
        return StateVector::from_amplitudes(v);
    };
    auto good = scaq_check({sup(0, 4), sup(0, 2), sup(0, 1)});
    auto bad = scaq_check({sup(0, 4), sup(0, 2), sup(0, 6)});
    bool pass = good.pass && good.uncovered.empty() && !bad.pass && bad.uncovered == std::vector<int>{2};
    std::string unc;
    for (int q : bad.uncovered) unc += (unc.empty() ? "" : ",") + std::to_string(q);
    return {pass, std::string("covering set ") + (good.pass ? "passes" : "fails") + "; set without qubit 2 " +
                      (bad.pass ? "passes" : "fails") + " with uncovered {" + unc + "} (want {2})"};
}

Outcome superposition() {
    auto cfg = ExperimentConfig::load(QTK_SOURCE_DIR "/configs/superposition.toml");
    cfg.validate();
    auto rep = run_experiment(cfg);
    std::int64_t ci_t = 0, ci_g = 0, csi_t = 0, csi_g = 0, crk_ci = -1, crk_csi = -1;
    int qft_mutants = 0;
    for (const auto& r : rep.rows) {
        if (r.benchmark == "QFT") {
            if (r.input == InputKind::CI) ci_t += r.trials, ci_g += r.triggers, qft_mutants += r.mutants;
            if (r.input == InputKind::CSI) csi_t += r.trials, csi_g += r.triggers;
        }
        if (r.benchmark == "CRk" && r.kind == MutationKind::MM) {
            if (r.input == InputKind::CI) crk_ci = r.triggers;
            if (r.input == InputKind::CSI) crk_csi = r.triggers;
        }
    }
    const double ci = ci_t ? double(ci_g) / ci_t : 0, csi = csi_t ? double(csi_g) / csi_t : 0;
    bool pass = qft_mutants >= 40 && csi >= ci + 0.10 && crk_ci == 0 && crk_csi > 0;
    return {pass, "QFT " + std::to_string(qft_mutants) + " mutants, CI " + fmt(ci) + " vs CSI " + fmt(csi) +
                      " (want >= 40 mutants, CSI >= CI + 0.10); CRk MM triggers CI " + std::to_string(crk_ci) + ", CSI " +
                      std::to_string(crk_csi) + " (want 0 and > 0)"};
}

Outcome grover() {
    const auto& lib = catalog().library();
    const int n = 4, keys = 20, shots = 100;
    Rng rng(101);
    int correct = 0;
    for (int k = 0; k < keys; ++k) {
        const std::uint64_t K = rng.below(16);
        auto oracle = std::make_shared<const Subroutine>(make_phase_oracle(n, K));
        auto inv = bind_auto(lib, lib.get("Grover"), {{"n", Value{std::int64_t{n}}}}, {{"OracleK", Handle{oracle, {}}}});
        StateVector s(inv.n_qubits);
        inv.run(s, rng);
        const auto qs = iota_qubits(0, n);
        for (int t = 0; t < shots; ++t) {
            StateVector copy = s;
            if (to_int(copy.measure(qs, rng)) == K) ++correct;
        }
    }
    const double rate = correct / double(keys * shots);
    return {rate >= 0.9, "n = 4, 20 random marks x 100 shots: " + fmt(rate) + " correct (want >= 0.9)"};
}

Outcome null_rejection() {
    const std::map<std::uint64_t, double> expected{{0, 0.1}, {1, 0.2}, {2, 0.3}, {3, 0.4}};
    StatConfig cfg;
    cfg.shots = 1000;
    cfg.alpha = 0.01;
    auto rejection_rate = [&](std::uint64_t seed, int reps) {
        int rejected = 0;
        for (int r = 0; r < reps; ++r) {
            Rng rng(Rng::derive(seed, {static_cast<std::uint64_t>(r)}));
            std::map<std::uint64_t, int> counts;
            for (int s = 0; s < cfg.shots; ++s) {
                double u = rng.uniform(), acc = 0;
                std::uint64_t k = 3;
                for (auto [v, p] : expected)
                    if (u < (acc += p)) {
                        k = v;
                        break;
                    }
                ++counts[k];
            }
            if (!stat_fit(counts, expected, cfg).passed) ++rejected;
        }
        return rejected / double(reps);
    };
    const double rate = rejection_rate(111, 1000);
    // informational only: a larger sample shows where the rate centres
    const double wide = rejection_rate(112, 20000);
    return {rate >= 0.005 && rate <= 0.02, "alpha 0.01, 1000 samples of 1000 shots: rejection rate " + fmt(rate) +
                                               " (want 0.005..0.02); 20000-sample estimate " + fmt(wide)};
}

Outcome generators() {
    double worst = 0;
    int cases = 0;
    for (int n = 1; n <= 5; ++n) {
        const std::uint64_t dim = std::uint64_t{1} << n, mask = dim - 1;
        for (std::uint64_t x = 0; x < dim; ++x) {
            worst = std::max(worst, max_diff(gen_ket_x(n, x).state().amplitudes(), basis(n, x).amplitudes()));
            ++cases;
            for (double th : {0.0, kPi / 2, kPi}) {
                std::vector<cplx> a(dim);
                a[x] = 1 / std::sqrt(2.0);
                a[x ^ mask] = std::polar(1 / std::sqrt(2.0), th);
                worst = std::max(worst, max_diff(gen_comp_sup(n, x, th).state().amplitudes(), a));
                ++cases;
                for (std::uint64_t y = 0; y < dim; ++y) {
                    if (y == x) continue;
                    std::vector<cplx> b(dim);
                    b[x] = 1 / std::sqrt(2.0);
                    b[y] = std::polar(1 / std::sqrt(2.0), th);
                    worst = std::max(worst, phase_free_diff(StateVector::from_amplitudes(b), gen_two_value(n, x, y, th).state()));
                    ++cases;
                }
            }
        }
        // |0>, |1>, |+>, |->, |+i>, |-i>
        const double h = 1 / std::sqrt(2.0);
        const std::vector<std::array<cplx, 2>> single{{1.0, 0.0},         {0.0, 1.0},          {h, h},
                                                      {h, -h},            {h, cplx{0, h}},     {h, cplx{0, -h}}};
        std::vector<int> idx(n, 1);
        for (;;) {
            std::vector<cplx> want(dim);
            for (std::uint64_t b = 0; b < dim; ++b) {
                cplx amp = 1.0;
                for (int q = 0; q < n; ++q) amp *= single[idx[q] - 1][(b >> (n - 1 - q)) & 1];
                want[b] = amp;
            }
            worst = std::max(worst, max_diff(gen_pauli(idx).state().amplitudes(), want));
            ++cases;
            int q = n - 1;
            while (q >= 0 && idx[q] == 6) idx[q--] = 1;
            if (q < 0) break;
            ++idx[q];
        }
    }

    Ensemble ens;
    ens.entries = {{0.5, gen_ket_x(1, 0)}, {0.3, gen_ket_x(1, 1)}, {0.2, gen_pauli({3})}};
    const int draws = 10000;
    std::vector<int> hits(3);
    Rng rng(121);
    for (int d = 0; d < draws; ++d) {
        auto s = gen_mixed(ens, rng).state();
        for (std::size_t i = 0; i < 3; ++i)
            if (s.fidelity(ens.entries[i].second.state()) > 1 - 1e-9) ++hits[i];
    }
    double freq_err = 0;
    for (std::size_t i = 0; i < 3; ++i) freq_err = std::max(freq_err, std::abs(hits[i] / double(draws) - ens.entries[i].first));
    return {worst <= 1e-10 && freq_err <= 0.02, std::to_string(cases) + " pure cases n 1..5, worst amplitude error " + fmt(worst) +
                                                     " (tol 1e-10); mixed frequencies off by " + fmt(freq_err) + " (tol 0.02)"};
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--strict")
            strict = true;
        else {
            std::cerr << "usage: acceptance [--strict]\n";
            return 2;
        }
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Bell state", bell},
        {"QFT matches dense DFT", qft_fidelity},
        {"QFT output check", qft_output},
        {"variant checks", variants},
        {"swap test", swap_test},
        {"phase estimation", qpe},
        {"MM mutants invisible to CI", mm_invisible},
        {"SCAQ", scaq},
        {"superposition inputs trigger more", superposition},
        {"Grover", grover},
        {"stat_fit null rejection", null_rejection},
        {"state generators", generators},
    };

    int passed = 0, known = 0, unexpected = 0;
    std::vector<int> red;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << " " << (i + 1 < 10 ? " " : "") << (i + 1) << " " << criteria[i].first << ": "
             << o.detail << " [" << fmt(secs, 3) << " s]";
        std::cout << line.str() << "\n";
        for (const auto& a : o.analysis) std::cout << "        " << a << "\n";
        std::cout.flush();
        if (o.pass)
            ++passed;
        else {
            red.push_back(static_cast<int>(i + 1));
            (o.known_red ? known : unexpected)++;
        }
    }

    std::cout << passed << "/" << criteria.size() << " criteria pass";
    if (!red.empty()) {
        std::cout << "; red:";
        for (int r : red) std::cout << " " << r;
        std::cout << " (" << known << " known, " << unexpected << " unexpected)";
    }
    std::cout << "\n";
    return unexpected > 0 || (strict && known > 0) ? 1 : 0;
}
