#include "qtk/stateprep/stateprep.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

namespace qtk {

namespace {

std::string num_str(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void check_width(int n) {
    if (n < 1) throw PrepError("a prepared register needs at least one qubit");
    if (n > kMaxQubits) throw PrepError("register of " + std::to_string(n) + " qubits exceeds the simulator limit");
}

void check_value(int n, std::uint64_t x, const char* what) {
    if (x >> n) throw PrepError(std::string(what) + " = " + std::to_string(x) + " does not fit in " + std::to_string(n) + " qubits");
}

int bit(std::uint64_t x, int n, int q) { return static_cast<int>((x >> (n - 1 - q)) & 1); }

// Comp-sup recipe on an arbitrary subset of qubits; `x` is read over that
// subset, first listed qubit most significant.
void comp_sup_ops(const std::vector<int>& qs, std::uint64_t x, double theta, std::vector<GateOp>& ops) {
    const int m = static_cast<int>(qs.size());
    const bool flipped = bit(x, m, 0) == 1;
    const std::uint64_t xp = flipped ? (~x & ((std::uint64_t{1} << m) - 1)) : x;
    ops.push_back({Gate(GateKind::H), {qs[0]}});
    if (theta != 0.0) {
        if (flipped) {
            // phase lands on the q0 = 0 branch, which carries x after normalization
            ops.push_back({Gate(GateKind::X), {qs[0]}});
            ops.push_back({Gate(GateKind::R1, theta), {qs[0]}});
            ops.push_back({Gate(GateKind::X), {qs[0]}});
        } else {
            ops.push_back({Gate(GateKind::R1, theta), {qs[0]}});
        }
    }
    for (int k = 1; k < m; ++k) ops.push_back({Gate(GateKind::CNOT), {qs[0], qs[static_cast<std::size_t>(k)]}});
    for (int k = 1; k < m; ++k)
        if (bit(xp, m, k)) ops.push_back({Gate(GateKind::X), {qs[static_cast<std::size_t>(k)]}});
}

std::string theta_str(double theta) { return num_str(theta); }

}  // namespace

std::string_view input_kind_name(InputKind k) {
    switch (k) {
        case InputKind::CI: return "CI";
        case InputKind::RTI: return "RTI";
        case InputKind::CSI: return "CSI";
        case InputKind::PAULI: return "PAULI";
        case InputKind::STV: return "STV";
    }
    return "?";
}

InputKind input_kind_from(std::string_view s) {
    for (auto k : {InputKind::CI, InputKind::RTI, InputKind::CSI, InputKind::PAULI, InputKind::STV})
        if (input_kind_name(k) == s) return k;
    throw PrepError("unknown input kind '" + std::string(s) + "'");
}

PreparedInput::PreparedInput(int n_qubits, std::string description, std::vector<GateOp> ops, bool has_unprepare)
    : n_(n_qubits), desc_(std::move(description)), ops_(std::move(ops)), unprep_(has_unprepare) {}

void PreparedInput::prepare(StateVector& state, std::span<const int> qubits) const {
    if (static_cast<int>(qubits.size()) != n_)
        throw PrepError(desc_ + " prepares " + std::to_string(n_) + " qubits, got " + std::to_string(qubits.size()));
    std::vector<int> t;
    for (const auto& op : ops_) {
        t.clear();
        for (int q : op.qubits) t.push_back(qubits[static_cast<std::size_t>(q)]);
        state.apply(op.gate, t);
    }
}

void PreparedInput::prepare(StateVector& state) const {
    auto q = iota_qubits(0, n_);
    prepare(state, q);
}

void PreparedInput::unprepare(StateVector& state, std::span<const int> qubits) const {
    if (!unprep_) throw PrepError(desc_ + " has no unprepare");
    if (static_cast<int>(qubits.size()) != n_)
        throw PrepError(desc_ + " prepares " + std::to_string(n_) + " qubits, got " + std::to_string(qubits.size()));
    std::vector<int> t;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        t.clear();
        for (int q : it->qubits) t.push_back(qubits[static_cast<std::size_t>(q)]);
        state.apply(it->gate.inverse(), t);
    }
}

void PreparedInput::unprepare(StateVector& state) const {
    auto q = iota_qubits(0, n_);
    unprepare(state, q);
}

StateVector PreparedInput::state() const {
    StateVector s(n_);
    prepare(s);
    return s;
}

Subroutine PreparedInput::as_subroutine(const std::string& name) const {
    using namespace ir;
    Subroutine s{name, {qubits_param("qs", n_)}, {}, {}};
    for (const auto& op : ops_) {
        std::vector<QubitRef> t;
        for (int q : op.qubits) t.push_back(at("qs", q));
        if (gate_has_angle(op.gate.kind))
            s.body.push_back(gate(op.gate.kind, Expr(op.gate.theta), t));
        else
            s.body.push_back(gate(op.gate.kind, t));
    }
    return s;
}

PreparedInput gen_ket_x(int n, std::uint64_t x) {
    check_width(n);
    check_value(n, x, "x");
    std::vector<GateOp> ops;
    for (int q = 0; q < n; ++q)
        if (bit(x, n, q)) ops.push_back({Gate(GateKind::X), {q}});
    return {n, "CI(x=" + std::to_string(x) + ",n=" + std::to_string(n) + ")", std::move(ops)};
}

PreparedInput gen_comp_sup(int n, std::uint64_t x, double theta) {
    check_width(n);
    check_value(n, x, "x");
    std::vector<GateOp> ops;
    comp_sup_ops(iota_qubits(0, n), x, theta, ops);
    return {n, "CSI(x=" + std::to_string(x) + ",n=" + std::to_string(n) + ",theta=" + theta_str(theta) + ")",
            std::move(ops)};
}

PreparedInput gen_two_value(int n, std::uint64_t x, std::uint64_t y, double theta) {
    check_width(n);
    check_value(n, x, "x");
    check_value(n, y, "y");
    if (x == y) throw PrepError("two-value input needs x != y; use a basis state instead");
    std::vector<GateOp> ops;
    std::vector<int> diff;
    std::uint64_t xd = 0;
    for (int q = 0; q < n; ++q) {
        if (bit(x, n, q) == bit(y, n, q)) {
            if (bit(x, n, q)) ops.push_back({Gate(GateKind::X), {q}});
        } else {
            diff.push_back(q);
            xd = (xd << 1) | static_cast<std::uint64_t>(bit(x, n, q));
        }
    }
    comp_sup_ops(diff, xd, theta, ops);
    return {n,
            "RTI(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ",n=" + std::to_string(n) +
                ",theta=" + theta_str(theta) + ")",
            std::move(ops)};
}

PreparedInput gen_pauli(const std::vector<int>& indices) {
    check_width(static_cast<int>(indices.size()));
    std::vector<GateOp> ops;
    std::string desc = "PAULI(";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int q = static_cast<int>(i);
        switch (indices[i]) {
            case 1: break;
            case 2: ops.push_back({Gate(GateKind::X), {q}}); break;
            case 3: ops.push_back({Gate(GateKind::H), {q}}); break;
            case 4:
                ops.push_back({Gate(GateKind::X), {q}});
                ops.push_back({Gate(GateKind::H), {q}});
                break;
            case 5:
                ops.push_back({Gate(GateKind::H), {q}});
                ops.push_back({Gate(GateKind::S), {q}});
                break;
            case 6:
                ops.push_back({Gate(GateKind::H), {q}});
                ops.push_back({Gate(GateKind::Sdg), {q}});
                break;
            default: throw PrepError("Pauli index " + std::to_string(indices[i]) + " is not in 1..6");
        }
        desc += (i ? "," : "") + std::to_string(indices[i]);
    }
    return {static_cast<int>(indices.size()), desc + ")", std::move(ops)};
}

void Ensemble::validate() const {
    if (entries.empty()) throw PrepError("empty ensemble");
    double total = 0;
    const int n = entries.front().second.n_qubits();
    for (const auto& [p, in] : entries) {
        if (!(p >= 0)) throw PrepError("negative ensemble probability");
        if (in.n_qubits() != n) throw PrepError("ensemble members differ in width");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw PrepError("ensemble probabilities sum to " + num_str(total));
}

PreparedInput gen_mixed(const Ensemble& ensemble, Rng& rng) {
    ensemble.validate();
    double u = rng.uniform(), acc = 0;
    const PreparedInput* pick = &ensemble.entries.back().second;
    for (const auto& [p, in] : ensemble.entries) {
        acc += p;
        if (u < acc) {
            pick = &in;
            break;
        }
    }
    return {pick->n_qubits(), "MIXED(" + pick->description() + ")", pick->ops(), false};
}

Ensemble max_mixed_ensemble(int n) {
    check_width(n);
    if (n > 12) throw PrepError("maximally mixed ensemble limited to 12 qubits");
    Ensemble e;
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < dim; ++x) e.entries.emplace_back(1.0 / static_cast<double>(dim), gen_ket_x(n, x));
    return e;
}

Subroutine ensemble_subroutine(const Ensemble& ensemble, const std::string& name) {
    using namespace ir;
    ensemble.validate();
    const int n = ensemble.entries.front().second.n_qubits();
    for (const auto& [p, m] : ensemble.entries)
        if (m.n_qubits() != n) throw PrepError("ensemble members differ in width");
    int bits = 0;
    std::vector<std::int64_t> cum;
    for (; bits <= n; ++bits) {
        const double scale = std::ldexp(1.0, bits);
        cum.clear();
        bool exact = true;
        double acc = 0;
        for (const auto& [p, m] : ensemble.entries) {
            acc += p * scale;
            const double r = std::round(acc);
            if (std::abs(acc - r) > 1e-9) exact = false;
            cum.push_back(static_cast<std::int64_t>(r));
        }
        if (exact) break;
    }
    if (bits > n) throw PrepError("ensemble probabilities are not multiples of 2^-" + std::to_string(n));
    Subroutine s{name, {qubits_param("qs", n)}, {}, {}};
    if (bits > 0) {
        std::vector<QubitRef> src;
        for (int q = 0; q < bits; ++q) {
            s.body.push_back(gate(GateKind::H, {at("qs", q)}));
            src.push_back(at("qs", q));
        }
        s.body.push_back(measure("r", src));
        for (int q = 0; q < bits; ++q)
            s.body.push_back(if_(eq((V("r") >> Expr(bits - 1 - q)) & Expr(1), Expr(1)), {gate(GateKind::X, {at("qs", q)})}));
    } else {
        s.body.push_back(assign("r", Expr(0)));
    }
    // nested if-chain over the cumulative thresholds
    Block tail;
    for (std::size_t i = ensemble.entries.size(); i-- > 0;) {
        Block recipe = ensemble.entries[i].second.as_subroutine(name).body;
        if (tail.empty() && i + 1 == ensemble.entries.size()) {
            tail = std::move(recipe);
            continue;
        }
        tail = Block{if_(lt(V("r"), Expr(cum[i])), std::move(recipe), std::move(tail))};
    }
    s.body.insert(s.body.end(), tail.begin(), tail.end());
    return s;
}

PreparedInput sample_input(InputKind kind, int n, Rng& rng) {
    check_width(n);
    const std::uint64_t dim = std::uint64_t{1} << n;
    switch (kind) {
        case InputKind::CI: return gen_ket_x(n, rng.below(dim));
        case InputKind::CSI: return gen_comp_sup(n, rng.below(dim), 0.0);
        case InputKind::RTI: {
            std::uint64_t x = rng.below(dim), y = rng.below(dim - 1);
            if (y >= x) ++y;
            return gen_two_value(n, x, y, 0.0);
        }
        case InputKind::PAULI: {
            std::vector<int> idx;
            for (int i = 0; i < n; ++i) idx.push_back(1 + static_cast<int>(rng.below(6)));
            return gen_pauli(idx);
        }
        case InputKind::STV: return sample_stv(n, rng);
    }
    throw PrepError("unknown input kind");
}

PreparedInput sample_stv(int n, Rng& rng) {
    check_width(n);
    const std::uint64_t dim = std::uint64_t{1} << n;
    auto form = rng.below(3);
    std::uint64_t x = rng.below(dim);
    if (form == 0) return gen_ket_x(n, x);
    std::uint64_t y = rng.below(dim - 1);
    if (y >= x) ++y;
    return gen_two_value(n, x, y, form == 1 ? 0.0 : std::numbers::pi / 2);
}

ScaqResult scaq_check(const std::vector<StateVector>& inputs, double eps) {
    ScaqResult r;
    if (inputs.empty()) throw PrepError("no inputs to check");
    const int n = inputs.front().n_qubits();
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (const auto& s : inputs) {
        if (s.n_qubits() != n) throw PrepError("inputs have different qubit counts");
        std::vector<double> p1(static_cast<std::size_t>(n), 0.0);
        const auto& a = s.amplitudes();
        for (std::uint64_t i = 0; i < a.size(); ++i) {
            double p = std::norm(a[i]);
            if (p == 0.0) continue;
            for (int q = 0; q < n; ++q)
                if ((i >> s.bit_position(q)) & 1) p1[static_cast<std::size_t>(q)] += p;
        }
        const double total = s.norm() * s.norm();
        for (int q = 0; q < n; ++q) {
            double one = p1[static_cast<std::size_t>(q)];
            if (one > eps && total - one > eps) covered[static_cast<std::size_t>(q)] = true;
        }
    }
    for (int q = 0; q < n; ++q)
        if (!covered[static_cast<std::size_t>(q)]) r.uncovered.push_back(q);
    r.pass = r.uncovered.empty();
    return r;
}

// ---------------------------------------------------------------- generator specs

namespace {

class SpecParser {
public:
    explicit SpecParser(std::string_view s) : s_(s) {}

    GeneratorSpec spec() {
        GeneratorSpec g;
        g.name = ident();
        if (g.name.empty()) fail("expected a generator name");
        expect('(');
        skip();
        if (peek() != ')') {
            for (;;) {
                std::string key;
                std::size_t save = pos_;
                std::string id = ident();
                skip();
                if (!id.empty() && peek() == '=' && (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '=')) {
                    ++pos_;
                    key = id;
                } else {
                    pos_ = save;
                }
                g.args.emplace_back(key, value());
                skip();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect(')');
        return g;
    }

    void finish() {
        skip();
        if (pos_ != s_.size()) fail("trailing text");
    }

private:
    [[noreturn]] void fail(const std::string& m) const {
        throw PrepError("generator '" + std::string(s_) + "': " + m + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void expect(char c) {
        skip();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string ident() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (b < pos_ && std::isdigit(static_cast<unsigned char>(s_[b]))) {
            pos_ = b;
            return {};
        }
        return std::string(s_.substr(b, pos_ - b));
    }

    GenArg value() {
        skip();
        GenArg a;
        if (peek() == '[') {
            ++pos_;
            a.kind = GenArg::Kind::List;
            skip();
            if (peek() != ']') {
                for (;;) {
                    a.list.push_back(value());
                    skip();
                    if (peek() == ',') {
                        ++pos_;
                        continue;
                    }
                    break;
                }
            }
            expect(']');
            return a;
        }
        std::size_t save = pos_;
        std::string id = ident();
        skip();
        static const std::set<std::string> gens{"ket_x", "comp_sup", "two_value", "pauli", "mixed", "max_mixed", "sample", "qft"};
        if (gens.count(id) && peek() == '(') {
            pos_ = save;
            a.kind = GenArg::Kind::Spec;
            a.spec.push_back(spec());
            return a;
        }
        pos_ = save;
        // expression text up to the next top-level separator
        int depth = 0;
        std::size_t b = pos_;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '(' || c == '[') ++depth;
            if (c == ')' || c == ']') {
                if (depth == 0) break;
                --depth;
            }
            if (c == ',' && depth == 0) break;
            ++pos_;
        }
        std::string text(s_.substr(b, pos_ - b));
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
        if (text.empty()) fail("missing value");
        bool word = std::all_of(text.begin(), text.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }) &&
                    !std::isdigit(static_cast<unsigned char>(text[0])) && text != "pi";
        if (word) {
            a.kind = GenArg::Kind::Word;
            a.word = text;
            return a;
        }
        struct PiEnv : EvalEnv {
            Value pi = std::numbers::pi;
            const Value* lookup(const std::string& n) const override { return n == "pi" ? &pi : nullptr; }
        } env;
        try {
            a.number = as_float(evaluate(Expr::parse(text), env), "generator argument");
        } catch (const ExprError& e) {
            fail(e.what());
        }
        return a;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

const GenArg* find_arg(const GeneratorSpec& g, const std::string& key, std::size_t position) {
    for (const auto& [k, v] : g.args)
        if (k == key) return &v;
    std::size_t i = 0;
    for (const auto& [k, v] : g.args) {
        if (!k.empty()) continue;
        if (i++ == position) return &v;
    }
    return nullptr;
}

double num_arg(const GeneratorSpec& g, const std::string& key, std::size_t position, std::optional<double> def = {}) {
    const GenArg* a = find_arg(g, key, position);
    if (!a) {
        if (def) return *def;
        throw PrepError(g.name + " needs argument '" + key + "'");
    }
    if (a->kind != GenArg::Kind::Number) throw PrepError(g.name + " argument '" + key + "' must be a number");
    return a->number;
}

std::int64_t int_arg(const GeneratorSpec& g, const std::string& key, std::size_t position) {
    double v = num_arg(g, key, position);
    if (v != std::floor(v) || v < 0) throw PrepError(g.name + " argument '" + key + "' must be a non-negative integer");
    return static_cast<std::int64_t>(v);
}

Ensemble ensemble_from(const GeneratorSpec& g, Rng& rng) {
    Ensemble e;
    for (const auto& [k, v] : g.args) {
        if (v.kind != GenArg::Kind::List || v.list.size() != 2 || v.list[0].kind != GenArg::Kind::Number ||
            v.list[1].kind != GenArg::Kind::Spec)
            throw PrepError("mixed entries are [probability, generator]");
        e.entries.emplace_back(v.list[0].number, v.list[1].spec[0].realize(rng));
    }
    return e;
}

}  // namespace

std::string GenArg::str() const {
    switch (kind) {
        case Kind::Number: return num_str(number);
        case Kind::Word: return word;
        case Kind::Spec: return spec.at(0).str();
        case Kind::List: {
            std::string out = "[";
            for (std::size_t i = 0; i < list.size(); ++i) out += (i ? ", " : "") + list[i].str();
            return out + "]";
        }
    }
    return {};
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
    SpecParser p(text);
    GeneratorSpec g = p.spec();
    p.finish();
    return g;
}

std::string GeneratorSpec::str() const {
    std::string out = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        if (!args[i].first.empty()) out += args[i].first + "=";
        out += args[i].second.str();
    }
    return out + ")";
}

PreparedInput GeneratorSpec::realize(Rng& rng) const {
    if (name == "ket_x") return gen_ket_x(static_cast<int>(int_arg(*this, "n", 0)), static_cast<std::uint64_t>(int_arg(*this, "x", 1)));
    if (name == "comp_sup")
        return gen_comp_sup(static_cast<int>(int_arg(*this, "n", 0)), static_cast<std::uint64_t>(int_arg(*this, "x", 1)),
                            num_arg(*this, "theta", 2, 0.0));
    if (name == "two_value")
        return gen_two_value(static_cast<int>(int_arg(*this, "n", 0)), static_cast<std::uint64_t>(int_arg(*this, "x", 1)),
                             static_cast<std::uint64_t>(int_arg(*this, "y", 2)), num_arg(*this, "theta", 3, 0.0));
    if (name == "pauli") {
        std::vector<int> idx;
        const GenArg* list = find_arg(*this, "indices", 0);
        if (list && list->kind == GenArg::Kind::List) {
            for (const auto& v : list->list) idx.push_back(static_cast<int>(v.number));
        } else {
            for (const auto& [k, v] : args) {
                if (v.kind != GenArg::Kind::Number) throw PrepError("pauli indices must be numbers");
                idx.push_back(static_cast<int>(v.number));
            }
        }
        return gen_pauli(idx);
    }
    if (name == "max_mixed") return gen_mixed(max_mixed_ensemble(static_cast<int>(int_arg(*this, "n", 0))), rng);
    if (name == "mixed") {
        Ensemble e = ensemble_from(*this, rng);
        return gen_mixed(e, rng);
    }
    if (name == "sample") {
        const GenArg* k = find_arg(*this, "kind", 0);
        if (!k || k->kind != GenArg::Kind::Word) throw PrepError("sample needs kind=CI|RTI|CSI|PAULI|STV");
        int n = static_cast<int>(int_arg(*this, "n", 1));
        return sample_input(input_kind_from(k->word), n, rng);
    }
    throw PrepError("unknown generator '" + name + "'");
}

int GeneratorSpec::n_qubits() const {
    if (name == "pauli") {
        const GenArg* list = find_arg(*this, "indices", 0);
        if (list && list->kind == GenArg::Kind::List) return static_cast<int>(list->list.size());
        return static_cast<int>(args.size());
    }
    if (name == "mixed") {
        if (args.empty() || args[0].second.kind != GenArg::Kind::List || args[0].second.list.size() != 2 ||
            args[0].second.list[1].kind != GenArg::Kind::Spec)
            throw PrepError("mixed entries are [probability, generator]");
        return args[0].second.list[1].spec[0].n_qubits();
    }
    if (name == "sample") return static_cast<int>(int_arg(*this, "n", 1));
    return static_cast<int>(int_arg(*this, "n", 0));
}

Subroutine GeneratorSpec::to_subroutine(const std::string& sub_name, Rng& rng) const {
    if (name == "max_mixed") return ensemble_subroutine(max_mixed_ensemble(static_cast<int>(int_arg(*this, "n", 0))), sub_name);
    if (name == "mixed") return ensemble_subroutine(ensemble_from(*this, rng), sub_name);
    return realize(rng).as_subroutine(sub_name);
}

bool GeneratorSpec::random() const { return name == "mixed" || name == "max_mixed" || name == "sample"; }

}  // namespace qtk
