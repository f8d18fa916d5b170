#include "qtk/benchsuite/benchsuite.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "programs.hpp"

namespace qtk {

namespace {

using bench::default_suite_yaml;

constexpr double kPi = std::numbers::pi;

Value I(std::int64_t v) { return Value{v}; }

std::shared_ptr<const Subroutine> share(Subroutine s) { return std::make_shared<const Subroutine>(std::move(s)); }

// Qubit indices of every register in bind_auto's consecutive layout.
std::map<std::string, std::vector<int>> register_layout(const Subroutine& sub, const std::map<std::string, Value>& classical,
                                                        const std::map<std::string, int>& widths) {
    auto lengths = param_lengths(sub, classical);
    std::map<std::string, std::vector<int>> out;
    int next = 0;
    for (const auto& p : sub.params) {
        if (p.kind != ParamKind::Qubits) continue;
        int len = 0;
        if (auto it = lengths.find(p.name); it != lengths.end())
            len = static_cast<int>(it->second);
        else if (auto w = widths.find(p.name); w != widths.end())
            len = w->second;
        out[p.name] = iota_qubits(next, len);
        next += len;
    }
    return out;
}

Invocation bind_marked(const Library& lib, const std::string& name, const IOMark& mark,
                       const std::map<std::string, Value>& classical, const std::map<std::string, Handle>& handles = {}) {
    SubPtr sub = lib.get(name);
    Invocation inv = bind_auto(lib, sub, classical, handles);
    auto layout = register_layout(*sub, classical, {});
    inv.io_in.clear();
    inv.io_out.clear();
    for (const auto& v : mark.inputs)
        if (v.is_quantum && !v.is_subroutine) inv.io_in.insert(inv.io_in.end(), layout[v.name].begin(), layout[v.name].end());
    for (const auto& v : mark.outputs)
        if (v.is_quantum && !v.is_subroutine) inv.io_out.insert(inv.io_out.end(), layout[v.name].begin(), layout[v.name].end());
    return inv;
}

// Amplitude permutation: basis index i moves to f(i).
StateVector permute(const StateVector& in, const std::function<std::uint64_t(std::uint64_t)>& f) {
    std::vector<cplx> out(in.dim());
    for (std::uint64_t i = 0; i < in.dim(); ++i) out[f(i)] += in.amplitude(i);
    return StateVector::from_amplitudes(std::move(out));
}

StateVector phase_map(const StateVector& in, const std::function<cplx(std::uint64_t)>& f) {
    std::vector<cplx> out(in.dim());
    for (std::uint64_t i = 0; i < in.dim(); ++i) out[i] = in.amplitude(i) * f(i);
    return StateVector::from_amplitudes(std::move(out));
}

std::uint64_t reverse_bits(std::uint64_t x, int n) {
    std::uint64_t r = 0;
    for (int b = 0; b < n; ++b) r |= ((x >> b) & 1u) << (n - 1 - b);
    return r;
}

void check_oracle_scale(int n) {
    if (n < 0 || n > kOracleMaxQubits)
        throw BenchError("oracle scale " + std::to_string(n) + " exceeds " + std::to_string(kOracleMaxQubits));
}

}  // namespace

// ---------------------------------------------------------------- oracles

std::vector<cplx> spec_qft(int n, const std::vector<cplx>& input) {
    check_oracle_scale(n);
    const std::size_t dim = std::size_t{1} << n;
    if (input.size() != dim) throw BenchError("spec_qft: input has " + std::to_string(input.size()) + " amplitudes");
    std::vector<cplx> out(dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t j = 0; j < dim; ++j)
            out[k] += input[j] * std::polar(norm, 2 * kPi * static_cast<double>((j * k) % dim) / static_cast<double>(dim));
    return out;
}

StateVector spec_qft_bitwise(int n, std::uint64_t j) {
    check_oracle_scale(n);
    StateVector out = StateVector::from_amplitudes({1.0});
    const double r = 1.0 / std::sqrt(2.0);
    for (int m = 0; m < n; ++m) {
        double phase = 2 * kPi * static_cast<double>(j % (std::uint64_t{1} << (m + 1))) / static_cast<double>(std::uint64_t{1} << (m + 1));
        out = out.tensor(StateVector::from_amplitudes({r, std::polar(r, phase)}));
    }
    return out;
}

double spec_swap_test(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.n_qubits() != rho2.n_qubits()) throw BenchError("spec_swap_test: width mismatch");
    return (1.0 + rho1.overlap(rho2)) / 2.0;
}

Subroutine make_phase_oracle(int n, std::uint64_t K) {
    using namespace ir;
    if (n < 1 || n > 62 || K >= (std::uint64_t{1} << n))
        throw BenchError("phase oracle needs 0 <= K < 2^n, got n=" + std::to_string(n) + " K=" + std::to_string(K));
    Subroutine s{"PhaseOracle_" + std::to_string(n) + "_" + std::to_string(K), {qubits_param("qs", Expr(n))}, {}, {}};
    Stmt core = gate(GateKind::Z, {at("qs", n - 1)});
    if (n > 1) {
        std::vector<int> pol;
        for (int i = 0; i < n - 1; ++i) pol.push_back(static_cast<int>((K >> (n - 1 - i)) & 1u));
        core = ctrl({controls(slice("qs", Expr(0), Expr(n - 1)), pol)}, core);
    }
    if ((K & 1u) == 0)
        s.body.push_back(within({gate(GateKind::X, {at("qs", n - 1)})}, {core}));
    else
        s.body.push_back(core);
    return s;
}

std::map<std::uint64_t, double> qpe_distribution(int nclock, const Handle& upower, const PreparedInput& target,
                                                 const Library& lib) {
    std::map<std::string, Value> classical{{"Nclock", I(nclock)}, {"Ntarget", I(target.n_qubits())}};
    Invocation inv = bind_auto(lib, lib.get("QPE"), classical, {{"Upower", upower}});
    StateVector s(inv.n_qubits);
    auto tq = iota_qubits(nclock, target.n_qubits());
    target.prepare(s, tq);
    Rng rng(0);
    inv.run(s, rng);
    return s.distribution(iota_qubits(0, nclock));
}

StateVector extract_subsystem(const StateVector& state, const std::vector<int>& qubits) {
    const int n = state.n_qubits();
    std::vector<int> rest;
    std::set<int> in(qubits.begin(), qubits.end());
    for (int q = 0; q < n; ++q)
        if (!in.count(q)) rest.push_back(q);
    auto compose = [&](std::uint64_t s, std::uint64_t r) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < qubits.size(); ++i)
            if ((s >> (qubits.size() - 1 - i)) & 1u) idx |= std::uint64_t{1} << state.bit_position(qubits[i]);
        for (std::size_t i = 0; i < rest.size(); ++i)
            if ((r >> (rest.size() - 1 - i)) & 1u) idx |= std::uint64_t{1} << state.bit_position(rest[i]);
        return idx;
    };
    const std::uint64_t ds = std::uint64_t{1} << qubits.size(), dr = std::uint64_t{1} << rest.size();
    std::uint64_t best = 0;
    double best_w = -1;
    for (std::uint64_t r = 0; r < dr; ++r) {
        double w = 0;
        for (std::uint64_t s = 0; s < ds; ++s) w += std::norm(state.amplitude(compose(s, r)));
        if (w > best_w) best_w = w, best = r;
    }
    std::vector<cplx> v(ds);
    for (std::uint64_t s = 0; s < ds; ++s) v[s] = state.amplitude(compose(s, best)) / std::sqrt(best_w);
    for (std::uint64_t r = 0; r < dr; ++r) {
        cplx ip = 0;
        double w = 0;
        for (std::uint64_t s = 0; s < ds; ++s) {
            cplx a = state.amplitude(compose(s, r));
            ip += std::conj(v[s]) * a;
            w += std::norm(a);
        }
        if (std::abs(w - std::norm(ip)) > 1e-9) throw BenchError("subsystem is entangled with the remaining qubits");
    }
    return StateVector::from_amplitudes(std::move(v));
}

// ---------------------------------------------------------------- catalog

bool BenchmarkEntry::has_quantum_input() const {
    for (const auto& v : io_mark.inputs)
        if (v.is_quantum && !v.is_subroutine) return true;
    return false;
}

Catalog::Catalog() {
    using namespace bench;
    for (auto s : {reset(), qrandom(), gen_qint(), gen_x_plus_y(), gen_max_sup(), gen_max_mix(), swap_test(), purity(),
                   inner_product(), empty(), reverse(), multi_swap(), crk(), phase_flip(), grover(), qft(), qadd(), teleport(),
                   qpe(), x_power(), h_power(), css_power(), crz_power(), reverse_skip_last(), crk_wrong_angle(), qft_bilo(),
                   phase_flip_no_undo(), make_phase_oracle(3, 5), make_phase_oracle(4, 11)})
        lib_.add(s);
    lib_.register_buggy("Reverse", "Reverse_bug");
    lib_.register_buggy("CRk", "CRk_bug");
    lib_.register_buggy("QFT", "QFT_BILO");
    lib_.register_buggy("PhaseFlip", "PhaseFlip_bug");

    const Library* lib = &lib_;
    auto add = [&](const std::string& name, const std::string& mark, std::function<Invocation(int)> bind,
                   std::function<StateVector(int, const StateVector&)> oracle = nullptr) {
        BenchmarkEntry e;
        e.name = name;
        e.subroutine = lib_.get(name);
        e.io_mark = IOMark::parse(mark);
        e.io_type = classify_io_type(e.io_mark);
        e.bind = std::move(bind);
        e.oracle = std::move(oracle);
        e.default_suite = Suite::from_yaml(default_suite_yaml(name)).docs.at(0);
        entries_.push_back(std::move(e));
    };
    auto marked = [lib](std::string name, std::string mark, auto classical, auto handles) {
        IOMark m = IOMark::parse(mark);
        return [lib, name, m, classical, handles](int n) { return bind_marked(*lib, name, m, classical(n), handles(n)); };
    };
    auto none = [](int) { return std::map<std::string, Handle>{}; };
    auto just_n = [](int n) { return std::map<std::string, Value>{{"n", I(n)}}; };
    auto zero_state = [lib](int n) {
        return std::map<std::string, Handle>{{"GenRho1", Handle{lib->get("GenQInt"), {I(n), I(0)}}},
                                             {"GenRho2", Handle{lib->get("GenQInt"), {I(n), I(0)}}},
                                             {"GenRho", Handle{lib->get("GenQInt"), {I(n), I(0)}}}};
    };
    auto with_t = [](int n) { return std::map<std::string, Value>{{"n", I(n)}, {"t", I(10)}}; };

    const std::string m_qrandom = "QRandom : (n) -> (r')";
    const std::string m_genqint = "GenQInt : (n, x) -> (q:qs')";
    const std::string m_xy = "GenXPlusY : (n, x, y) -> (q:qs')";
    const std::string m_sup = "GenMaxSup : (n) -> (q:qs')";
    const std::string m_mix = "GenMaxMix : (n) -> (q:qs')";
    const std::string m_swap = "SwapTest : (n, sub:q:GenRho1, sub:q:GenRho2) -> (result')";
    const std::string m_purity = "Purity : (n, t, sub:q:GenRho) -> (isPure')";
    const std::string m_inner = "InnerProduct : (n, t, sub:q:GenRho1, sub:q:GenRho2) -> (est')";
    const std::string m_empty = "Empty : (n, q:qs) -> (q:qs')";
    const std::string m_reverse = "Reverse : (n, q:qs) -> (q:qs')";
    const std::string m_mswap = "MultiSWAP : (n, q:qs1, q:qs2) -> (q:qs1', q:qs2')";
    const std::string m_crk = "CRk : (k, q:qctrl, q:qtar) -> (q:qctrl', q:qtar')";
    const std::string m_flip = "PhaseFlip : (n, q:qs) -> (q:qs')";
    const std::string m_grover = "Grover : (n, sub:q:OracleK) -> (q:qs')";
    const std::string m_qft = "QFT : (n, q:qs) -> (q:qs'^BE)";
    const std::string m_qadd = "QAdd : (n, q:qs1, q:qs2) -> (q:qs1', q:qs2')";
    const std::string m_teleport = "Teleport : (q:qsrc) -> (q:qdest')";
    const std::string m_qpe = "QPE : (Nclock, Ntarget, sub:q:Upower, q:target) -> (q:clock'^BE)";

    add("QRandom", m_qrandom, marked("QRandom", m_qrandom, just_n, none));
    add("GenQInt", m_genqint,
        marked("GenQInt", m_genqint, [](int n) { return std::map<std::string, Value>{{"n", I(n)}, {"x", I(0)}}; }, none));
    add("GenXPlusY", m_xy,
        marked("GenXPlusY", m_xy,
               [](int n) {
                   return std::map<std::string, Value>{{"n", I(n)}, {"x", I(0)}, {"y", I((std::int64_t{1} << n) - 1)}};
               },
               none));
    add("GenMaxSup", m_sup, marked("GenMaxSup", m_sup, just_n, none));
    add("GenMaxMix", m_mix, marked("GenMaxMix", m_mix, just_n, none));
    add("SwapTest", m_swap, marked("SwapTest", m_swap, just_n, zero_state));
    add("Purity", m_purity, marked("Purity", m_purity, with_t, zero_state));
    add("InnerProduct", m_inner, marked("InnerProduct", m_inner, with_t, zero_state));

    add("Empty", m_empty, marked("Empty", m_empty, just_n, none), [](int n, const StateVector& in) {
        check_oracle_scale(n);
        return in;
    });
    add("Reverse", m_reverse, marked("Reverse", m_reverse, just_n, none), [](int n, const StateVector& in) {
        check_oracle_scale(n);
        return permute(in, [n](std::uint64_t x) { return reverse_bits(x, n); });
    });
    add("MultiSWAP", m_mswap, marked("MultiSWAP", m_mswap, just_n, none), [](int n, const StateVector& in) {
        check_oracle_scale(n);
        const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
        return permute(in, [n, mask](std::uint64_t x) { return ((x & mask) << n) | (x >> n); });
    });
    add("CRk", m_crk,
        marked("CRk", m_crk, [](int k) { return std::map<std::string, Value>{{"k", I(k)}}; }, none),
        [](int k, const StateVector& in) {
            const cplx phase = std::polar(1.0, kPi / std::ldexp(1.0, k));
            return phase_map(in, [phase](std::uint64_t x) { return x == 3 ? phase : cplx{1.0}; });
        });
    add("PhaseFlip", m_flip, marked("PhaseFlip", m_flip, just_n, none), [](int n, const StateVector& in) {
        check_oracle_scale(n);
        return phase_map(in, [](std::uint64_t x) { return x > 0 ? cplx{-1.0} : cplx{1.0}; });
    });
    add("Grover", m_grover,
        marked("Grover", m_grover, just_n,
               [](int n) {
                   return std::map<std::string, Handle>{{"OracleK", Handle{share(make_phase_oracle(n, 0)), {}}}};
               }));
    add("QFT", m_qft, marked("QFT", m_qft, just_n, none),
        [](int n, const StateVector& in) { return StateVector::from_amplitudes(spec_qft(n, in.amplitudes())); });
    add("QAdd", m_qadd, marked("QAdd", m_qadd, just_n, none), [](int n, const StateVector& in) {
        check_oracle_scale(n);
        const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
        return permute(in, [n, mask](std::uint64_t v) {
            std::uint64_t x = v >> n, y = v & mask;
            return (x << n) | ((x + y) & mask);
        });
    });
    add("Teleport", m_teleport, marked("Teleport", m_teleport, [](int) { return std::map<std::string, Value>{}; }, none),
        [](int, const StateVector& in) { return in; });
    add("QPE", m_qpe,
        marked("QPE", m_qpe, [](int n) { return std::map<std::string, Value>{{"Nclock", I(n)}, {"Ntarget", I(1)}}; },
               [lib](int) { return std::map<std::string, Handle>{{"Upower", Handle{lib->get("XPower"), {}}}}; }));
}

const BenchmarkEntry* Catalog::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

const BenchmarkEntry& Catalog::get(const std::string& name) const {
    if (auto e = find(name)) return *e;
    throw BenchError("unknown benchmark '" + name + "'");
}

std::vector<std::string> Catalog::names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
}

Suite Catalog::default_suites() const {
    Suite s;
    for (const auto& e : entries_) s.docs.push_back(e.default_suite);
    return s;
}

const Catalog& catalog() {
    static const Catalog c;
    return c;
}

}  // namespace qtk
