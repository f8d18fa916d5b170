#include "qtk/testkit/testkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace qtk {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

Value parse_literal(const std::string& t) {
    if (t == "true") return Value{true};
    if (t == "false") return Value{false};
    std::int64_t i = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), i);
    if (r.ec == std::errc() && r.ptr == t.data() + t.size()) return Value{i};
    double d = 0;
    auto rd = std::from_chars(t.data(), t.data() + t.size(), d);
    if (rd.ec == std::errc() && rd.ptr == t.data() + t.size()) return Value{d};
    throw CaseError("not a literal: '" + t + "'");
}

Value arg_value(const GenArg& a) {
    if (a.kind == GenArg::Kind::Number) {
        if (a.number == std::floor(a.number) && std::abs(a.number) < 9e15) return Value{static_cast<std::int64_t>(a.number)};
        return Value{a.number};
    }
    if (a.kind == GenArg::Kind::Word && (a.word == "true" || a.word == "false")) return Value{a.word == "true"};
    throw CaseError("expected a number or true/false, got '" + a.str() + "'");
}

double arg_number(const GenArg& a) {
    if (a.kind != GenArg::Kind::Number) throw CaseError("expected a number, got '" + a.str() + "'");
    return a.number;
}

const GenArg& nth(const GeneratorSpec& g, std::size_t i, const std::string& key = {}) {
    if (!key.empty())
        for (const auto& [k, v] : g.args)
            if (k == key) return v;
    if (i >= g.args.size()) throw CaseError(g.name + "(...) needs " + std::to_string(i + 1) + " arguments");
    return g.args[i].second;
}

void expect_args(const GeneratorSpec& g, std::size_t n) {
    if (g.args.size() != n) throw CaseError(g.name + "(...) takes " + std::to_string(n) + " arguments");
}

std::uint64_t outcome_key(const Value& v) {
    if (auto b = std::get_if<bool>(&v)) return *b ? 1 : 0;
    if (auto i = std::get_if<std::int64_t>(&v)) {
        if (*i < 0) throw CaseError("negative outcome " + std::to_string(*i));
        return static_cast<std::uint64_t>(*i);
    }
    throw CaseError("distribution outcomes must be integers or booleans");
}

std::string bits_str(const std::vector<int>& bits) {
    std::string s;
    for (int b : bits) s += static_cast<char>('0' + b);
    return s;
}

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

// ---------------------------------------------------------------- partitions

void Partition::validate() const {
    if (classes.empty()) throw CaseError("partition of '" + variable + "' has no classes");
    std::set<std::string> labels;
    for (const auto& c : classes) {
        if (c.label.empty()) throw CaseError("partition of '" + variable + "' has an unlabeled class");
        if (!labels.insert(c.label).second) throw CaseError("partition of '" + variable + "' repeats label '" + c.label + "'");
        if (c.literals.empty() && !c.sampler) throw CaseError("class '" + c.label + "' of '" + variable + "' is empty");
    }
}

std::string_view criterion_name(Criterion c) { return c == Criterion::ACoC ? "ACoC" : "ECC"; }

Criterion criterion_from(std::string_view s) {
    if (s == "ACoC") return Criterion::ACoC;
    if (s == "ECC") return Criterion::ECC;
    throw CaseError("unknown combination criterion '" + std::string(s) + "'");
}

std::vector<ClassTuple> combine(const std::vector<Partition>& partitions, Criterion criterion) {
    if (partitions.empty()) throw CaseError("combine needs at least one partition");
    for (const auto& p : partitions) p.validate();
    std::vector<ClassTuple> out;
    if (criterion == Criterion::ECC) {
        std::size_t rows = 0;
        for (const auto& p : partitions) rows = std::max(rows, p.classes.size());
        for (std::size_t i = 0; i < rows; ++i) {
            ClassTuple t;
            for (const auto& p : partitions) t.push_back(std::min(i, p.classes.size() - 1));
            out.push_back(std::move(t));
        }
        return out;
    }
    ClassTuple t(partitions.size(), 0);
    for (;;) {
        out.push_back(t);
        std::size_t k = partitions.size();
        while (k-- > 0) {
            if (++t[k] < partitions[k].classes.size()) break;
            t[k] = 0;
            if (k == 0) return out;
        }
    }
}

// ---------------------------------------------------------------- expectations

Expectation Expectation::parse(std::string_view text) {
    const std::string t = trim(text);
    Expectation e;
    if (t.find('(') == std::string::npos) {
        e.kind = Kind::Equals;
        e.value = parse_literal(t);
        return e;
    }
    GeneratorSpec g;
    try {
        g = GeneratorSpec::parse(t);
    } catch (const PrepError& err) {
        throw CaseError(std::string("expectation: ") + err.what());
    }
    auto spec_arg = [&](const GenArg& a) {
        if (a.kind != GenArg::Kind::Spec) throw CaseError(g.name + "(...) needs a generator, got '" + a.str() + "'");
        if (a.spec[0].random()) throw CaseError(g.name + "(...) needs a deterministic generator");
        return a.spec[0];
    };
    if (g.name == "approx") {
        expect_args(g, 2);
        e.kind = Kind::Approx;
        e.value = Value{arg_number(nth(g, 0))};
        e.tolerance = arg_number(nth(g, 1));
    } else if (g.name == "range") {
        expect_args(g, 2);
        e.kind = Kind::Range;
        e.lo = static_cast<std::int64_t>(arg_number(nth(g, 0)));
        e.hi = static_cast<std::int64_t>(arg_number(nth(g, 1)));
        if (e.lo > e.hi) throw CaseError("empty range");
    } else if (g.name == "dist") {
        e.kind = Kind::Dist;
        if (g.args.empty()) throw CaseError("dist(...) needs outcomes");
        for (const auto& [k, a] : g.args) {
            if (a.kind != GenArg::Kind::List || a.list.size() != 2) throw CaseError("dist entries are [outcome, probability]");
            e.dist[outcome_key(arg_value(a.list[0]))] += arg_number(a.list[1]);
        }
        double s = 0;
        for (const auto& [o, p] : e.dist) s += p;
        if (std::abs(s - 1) > 1e-9) throw CaseError("dist probabilities sum to " + num(s));
    } else if (g.name == "freq") {
        expect_args(g, 2);
        e.kind = Kind::Freq;
        e.value = arg_value(nth(g, 0));
        e.fraction = arg_number(nth(g, 1));
        if (e.fraction < 0 || e.fraction > 1) throw CaseError("freq fraction outside [0, 1]");
    } else if (g.name == "state" || g.name == "differs") {
        expect_args(g, 1);
        e.kind = g.name == "state" ? Kind::State : Kind::Differs;
        e.generator = spec_arg(nth(g, 0));
    } else if (g.name == "qft") {
        expect_args(g, 1);
        e.kind = Kind::Qft;
        e.j = static_cast<std::uint64_t>(arg_number(nth(g, 0, "j")));
    } else if (g.name == "overlap") {
        expect_args(g, 2);
        e.kind = Kind::Overlap;
        const GenArg& inner = nth(g, 0);
        if (inner.kind == GenArg::Kind::Spec && inner.spec[0].name == "qft") {
            e.overlap_qft = true;
            e.j = static_cast<std::uint64_t>(arg_number(nth(inner.spec[0], 0, "j")));
        } else {
            e.generator = spec_arg(inner);
        }
        e.fraction = arg_number(nth(g, 1));
        if (e.fraction < 0 || e.fraction > 1) throw CaseError("overlap probability outside [0, 1]");
    } else {
        throw CaseError("unknown expectation '" + g.name + "'");
    }
    return e;
}

std::string Expectation::str() const {
    switch (kind) {
        case Kind::Equals: return value_str(value);
        case Kind::Approx: return "approx(" + value_str(value) + ", " + num(tolerance) + ")";
        case Kind::Range: return "range(" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
        case Kind::Dist: {
            std::string s = "dist(";
            bool first = true;
            for (const auto& [o, p] : dist) {
                s += (first ? "[" : ", [") + std::to_string(o) + ", " + num(p) + "]";
                first = false;
            }
            return s + ")";
        }
        case Kind::Freq: return "freq(" + value_str(value) + ", " + num(fraction) + ")";
        case Kind::State: return "state(" + generator->str() + ")";
        case Kind::Differs: return "differs(" + generator->str() + ")";
        case Kind::Qft: return "qft(j=" + std::to_string(j) + ")";
        case Kind::Overlap:
            return "overlap(" + (overlap_qft ? "qft(j=" + std::to_string(j) + ")" : generator->str()) + ", " + num(fraction) + ")";
    }
    return {};
}

bool Expectation::quantum_only() const {
    return kind == Kind::State || kind == Kind::Qft || kind == Kind::Differs || kind == Kind::Overlap;
}

HandleInput HandleInput::parse(std::string_view text) {
    const std::string t = trim(text);
    HandleInput h;
    if (t.find('(') == std::string::npos) {
        if (t.empty()) throw CaseError("empty subroutine reference");
        h.library_name = t;
        return h;
    }
    try {
        h.generator = GeneratorSpec::parse(t);
    } catch (const PrepError& err) {
        throw CaseError(std::string("subroutine input: ") + err.what());
    }
    return h;
}

std::string HandleInput::str() const { return generator ? generator->str() : library_name; }

// ---------------------------------------------------------------- test cases

TestCase::TestCase(IOMark mark, CaseSpec spec) : mark_(std::move(mark)), spec_(std::move(spec)) {
    const std::string where = "case '" + spec_.name + "': ";
    if (spec_.repetitions < 1) throw CaseError(where + "repetitions must be at least 1");
    if (!(spec_.alpha > 0 && spec_.alpha < 1)) throw CaseError(where + "alpha must lie in (0, 1)");
    for (const auto& v : mark_.inputs) {
        if (v.is_subroutine) {
            if (!spec_.subroutine_inputs.count(v.name)) throw CaseError(where + "no subroutine given for '" + v.name + "'");
        } else if (v.is_quantum) {
            if (!spec_.quantum_inputs.count(v.name))
                throw CaseError(where + "quantum input '" + v.name + "' has no generation procedure");
        } else if (!spec_.classical_inputs.count(v.name)) {
            throw CaseError(where + "no value for input '" + v.name + "'");
        }
    }
    for (const auto& [name, g] : spec_.quantum_inputs) {
        const MarkedVar* v = mark_.input(name);
        if (!v || !v->is_quantum || v->is_subroutine) throw CaseError(where + "'" + name + "' is not a quantum input");
    }
    for (const auto& [name, h] : spec_.subroutine_inputs) {
        const MarkedVar* v = mark_.input(name);
        if (!v || !v->is_subroutine) throw CaseError(where + "'" + name + "' is not a subroutine input");
    }
    for (const auto& [name, e] : spec_.expected_classical) {
        const MarkedVar* v = mark_.output(name);
        if (!v || v->is_quantum) throw CaseError(where + "'" + name + "' is not a classical output");
        if (e.quantum_only()) throw CaseError(where + "'" + e.str() + "' needs a quantum output");
    }
    for (const auto& [name, e] : spec_.expected_quantum) {
        const MarkedVar* v = mark_.output(name);
        if (!v || !v->is_quantum) throw CaseError(where + "'" + name + "' is not a quantum output");
    }
}

CheckVerdict run_case(const Library& lib, const TestCase& tc, Rng& rng) {
    return run_case(lib, *lib.get(tc.mark().program), tc, rng);
}

CheckVerdict run_case(const Library& lib, const Subroutine& sub, const TestCase& tc, Rng& rng) {
    const CaseSpec& cs = tc.spec();
    CheckVerdict v{"case", cs.name, true, 0, 1.0, cs.alpha, {}};
    auto record_fail = [&](const std::string& w) {
        if (v.passed) {
            v.passed = false;
            v.witness = w;
        }
    };

    auto realize_handle = [&](const std::string& param, const HandleInput& h) -> Handle {
        if (h.generator) return Handle{std::make_shared<const Subroutine>(h.generator->to_subroutine(param, rng)), {}};
        SubPtr target = lib.find(h.library_name);
        if (!target) throw CaseError("case '" + cs.name + "': unknown subroutine '" + h.library_name + "'");
        return Handle{target, {}};
    };

    auto sub_ptr = std::make_shared<const Subroutine>(sub);
    std::map<std::string, int> widths = cs.widths;
    for (const auto& [name, g] : cs.quantum_inputs) widths.emplace(name, g.n_qubits());
    std::map<std::string, Handle> handles;
    for (const auto& [name, h] : cs.subroutine_inputs) handles[name] = realize_handle(name, h);
    Invocation inv;
    try {
        inv = bind_auto(lib, sub_ptr, cs.classical_inputs, handles, widths);
    } catch (const std::invalid_argument& e) {
        throw CaseError("case '" + cs.name + "': " + e.what());
    } catch (const ExprError& e) {
        throw CaseError("case '" + cs.name + "': " + e.what());
    }
    auto reg = [&](const std::string& name) -> const std::vector<int>& {
        int idx = sub.param_index(name);
        if (idx < 0 || sub.params[idx].kind != ParamKind::Qubits)
            throw CaseError("case '" + cs.name + "': '" + name + "' is not a register of " + sub.name);
        return std::get<std::vector<int>>(inv.args[static_cast<std::size_t>(idx)]);
    };
    for (const auto& [name, g] : cs.quantum_inputs)
        if (static_cast<int>(reg(name).size()) != g.n_qubits())
            throw CaseError("case '" + cs.name + "': generator for '" + name + "' prepares " + std::to_string(g.n_qubits()) +
                            " qubits, register has " + std::to_string(reg(name).size()));
    for (const auto& [name, e] : cs.expected_quantum) (void)reg(name);

    // per-output aggregates
    std::map<std::string, std::map<std::uint64_t, int>> counts;
    std::map<std::string, int> hits;  // freq matches, overlap zeros, differs observations

    auto read_int = [&](const std::string& name, const std::vector<int>& bits) {
        const MarkedVar* mv = tc.mark().output(name);
        std::vector<int> b = bits;
        if (mv && mv->endian == Endian::LE) std::reverse(b.begin(), b.end());
        return Value{static_cast<std::int64_t>(bits_to_value(b))};
    };

    auto check_value = [&](const std::string& name, const Expectation& e, const Value& got, int rep) {
        const std::string at = "rep " + std::to_string(rep) + ": " + name + "=";
        switch (e.kind) {
            case Expectation::Kind::Equals:
                if (!value_equal(got, e.value)) record_fail(at + value_str(got) + " expected " + value_str(e.value));
                break;
            case Expectation::Kind::Approx: {
                double x = as_float(got, name);
                if (std::abs(x - as_float(e.value, name)) > e.tolerance) record_fail(at + value_str(got) + " expected " + e.str());
                break;
            }
            case Expectation::Kind::Range: {
                std::int64_t x = std::holds_alternative<bool>(got) ? std::get<bool>(got) : as_int(got, name);
                if (x < e.lo || x > e.hi) record_fail(at + value_str(got) + " outside " + e.str());
                break;
            }
            case Expectation::Kind::Dist: ++counts[name][outcome_key(got)]; break;
            case Expectation::Kind::Freq: hits[name] += value_equal(got, e.value); break;
            default: break;
        }
    };

    for (int rep = 0; rep < cs.repetitions; ++rep) {
        ++v.shots;
        StateVector st(inv.n_qubits);
        for (const auto& [name, g] : cs.quantum_inputs) g.realize(rng).prepare(st, reg(name));
        Invocation run = inv;
        for (const auto& [name, h] : cs.subroutine_inputs)
            if (h.generator && h.generator->name == "sample")
                run.args[static_cast<std::size_t>(sub.param_index(name))] = realize_handle(name, h);
        std::map<std::string, Value> outs;
        try {
            outs = run.run(st, rng);
        } catch (const Fault& f) {
            record_fail("rep " + std::to_string(rep) + ": fault " + std::string(fault_kind_name(f.kind())) +
                        (f.site().empty() ? "" : " at " + f.site()) + ": " + f.what());
            continue;
        }
        for (const auto& [name, e] : cs.expected_classical) {
            auto it = outs.find(name);
            if (it == outs.end()) {
                record_fail("rep " + std::to_string(rep) + ": no output '" + name + "'");
                continue;
            }
            check_value(name, e, it->second, rep);
        }
        for (const auto& [name, e] : cs.expected_quantum) {
            const auto& q = reg(name);
            switch (e.kind) {
                case Expectation::Kind::State:
                case Expectation::Kind::Differs:
                case Expectation::Kind::Qft:
                case Expectation::Kind::Overlap: {
                    if (e.kind == Expectation::Kind::Qft || (e.kind == Expectation::Kind::Overlap && e.overlap_qft)) {
                        if (q.empty()) throw CaseError("qft check on an empty register");
                        qft_output_unprepare(e.j, st, q);
                    } else {
                        auto p = e.generator->realize(rng);
                        if (p.n_qubits() != static_cast<int>(q.size()))
                            throw CaseError("case '" + cs.name + "': " + e.str() + " does not fit '" + name + "'");
                        p.unprepare(st, q);
                    }
                    auto bits = st.measure(q, rng);
                    const bool zero = std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; });
                    if (e.kind == Expectation::Kind::Differs)
                        hits[name] += !zero;
                    else if (e.kind == Expectation::Kind::Overlap)
                        hits[name] += zero;
                    else if (!zero)
                        record_fail("rep " + std::to_string(rep) + ": " + name + " observed=" + bits_str(bits) + " after undoing " +
                                    e.str());
                    break;
                }
                default: check_value(name, e, read_int(name, st.measure(q, rng)), rep);
            }
        }
    }

    auto fold = [&](const std::map<std::string, Expectation>& exps) {
        for (const auto& [name, e] : exps) {
            switch (e.kind) {
                case Expectation::Kind::Dist: {
                    if (!counts.count(name)) break;
                    StatConfig cfg;
                    cfg.alpha = cs.alpha;
                    auto r = stat_fit(counts[name], e.dist, cfg);
                    v.statistic = std::min(v.statistic, r.statistic);
                    if (!r.passed) record_fail(name + ": " + *r.witness);
                    break;
                }
                case Expectation::Kind::Freq: {
                    double f = static_cast<double>(hits[name]) / cs.repetitions;
                    if (f < e.fraction) record_fail(name + ": " + value_str(e.value) + " in " + num(f) + " of repetitions, expected at least " + num(e.fraction));
                    break;
                }
                case Expectation::Kind::Differs:
                    if (hits[name] == 0) record_fail(name + ": output indistinguishable from " + e.generator->str() + " in " + std::to_string(cs.repetitions) + " repetitions");
                    break;
                case Expectation::Kind::Overlap: {
                    std::map<std::uint64_t, double> want;
                    if (e.fraction > 0) want[0] = e.fraction;
                    if (e.fraction < 1) want[1] = 1 - e.fraction;
                    std::map<std::uint64_t, int> got{{0, hits[name]}, {1, cs.repetitions - hits[name]}};
                    StatConfig cfg;
                    cfg.alpha = cs.alpha;
                    auto r = stat_fit(got, want, cfg);
                    v.statistic = std::min(v.statistic, r.statistic);
                    if (!r.passed) record_fail(name + ": all-zero in " + std::to_string(hits[name]) + " of " + std::to_string(cs.repetitions) + " after undoing " + e.str());
                    break;
                }
                default: break;
            }
        }
    };
    fold(cs.expected_classical);
    fold(cs.expected_quantum);
    return v;
}

// ---------------------------------------------------------------- reports

std::string SuiteSummary::status() const {
    if (records.empty()) return "no cases";
    return failed ? "fail" : "pass";
}

std::string SuiteSummary::to_csv() const {
    std::string out = "subroutine,case,verdict,shots,witness\n";
    for (const auto& r : records)
        out += csv_field(r.subroutine) + "," + csv_field(r.case_name) + "," + (r.verdict.passed ? "pass" : "fail") + "," +
               std::to_string(r.verdict.shots) + "," + csv_field(r.verdict.witness.value_or("")) + "\n";
    return out;
}

nlohmann::json SuiteSummary::to_json() const {
    nlohmann::json j;
    j["status"] = status();
    j["passed"] = passed;
    j["failed"] = failed;
    auto& subs = j["subroutines"] = nlohmann::json::object();
    for (const auto& [name, s] : per_subroutine)
        subs[name] = {{"passed", s.passed},
                      {"failed", s.failed},
                      {"first_witness", s.first_witness ? nlohmann::json(*s.first_witness) : nlohmann::json(nullptr)}};
    auto& cases = j["cases"] = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json c = r.verdict;
        c["subroutine"] = r.subroutine;
        c["case"] = r.case_name;
        cases.push_back(std::move(c));
    }
    return j;
}

SuiteSummary suite_report(std::vector<CaseRecord> records) {
    SuiteSummary s;
    for (const auto& r : records) {
        auto& per = s.per_subroutine[r.subroutine];
        if (r.verdict.passed) {
            ++per.passed;
            ++s.passed;
        } else {
            ++per.failed;
            ++s.failed;
            if (!per.first_witness) per.first_witness = r.verdict.witness.value_or("");
        }
    }
    s.records = std::move(records);
    return s;
}

}  // namespace qtk
