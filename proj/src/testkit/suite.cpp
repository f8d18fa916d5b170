#include "qtk/testkit/suite.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

namespace qtk {

namespace {

Value scalar_value(const YAML::Node& n, const std::string& what) {
    if (!n.IsScalar()) throw CaseError(what + " must be a scalar");
    const std::string s = n.Scalar();
    if (s == "true" || s == "True") return Value{true};
    if (s == "false" || s == "False") return Value{false};
    try {
        std::size_t used = 0;
        long long i = std::stoll(s, &used);
        if (used == s.size()) return Value{static_cast<std::int64_t>(i)};
    } catch (const std::exception&) {
    }
    try {
        std::size_t used = 0;
        double d = std::stod(s, &used);
        if (used == s.size()) return Value{d};
    } catch (const std::exception&) {
    }
    throw CaseError(what + ": '" + s + "' is not a number or boolean");
}

template <class F>
void each_entry(const YAML::Node& map, const std::string& what, F f) {
    if (!map) return;
    if (!map.IsMap()) throw CaseError(what + " must be a mapping");
    for (const auto& kv : map) f(kv.first.as<std::string>(), kv.second);
}

std::string str_of(const YAML::Node& n, const std::string& what) {
    if (!n || !n.IsScalar()) throw CaseError(what + " must be a string");
    return n.Scalar();
}

GeneratorSpec gen_of(const YAML::Node& n, const std::string& what) {
    try {
        return GeneratorSpec::parse(str_of(n, what));
    } catch (const PrepError& e) {
        throw CaseError(what + ": " + e.what());
    }
}

Partition parse_partition(const YAML::Node& n) {
    Partition p;
    p.variable = str_of(n["variable"], "partition variable");
    const YAML::Node cls = n["classes"];
    if (!cls || !cls.IsSequence()) throw CaseError("partition of '" + p.variable + "' needs a classes list");
    for (const auto& c : cls) {
        EquivClass ec;
        ec.label = str_of(c["label"], "class label");
        if (const auto vals = c["values"]) {
            if (!vals.IsSequence()) throw CaseError("class values must be a list");
            for (const auto& v : vals) ec.literals.push_back(scalar_value(v, "class value"));
        }
        if (c["generator"]) ec.sampler = gen_of(c["generator"], "class generator");
        p.classes.push_back(std::move(ec));
    }
    p.validate();
    return p;
}

TestCase parse_case(const YAML::Node& n, const IOMark& mark) {
    CaseSpec cs;
    cs.name = str_of(n["name"], "case name");
    const std::string where = "case '" + cs.name + "'";
    if (const auto c = n["classes"]) {
        if (!c.IsSequence()) throw CaseError(where + ": classes must be a list");
        for (const auto& l : c) cs.classes.push_back(str_of(l, "class label"));
    }
    each_entry(n["inputs"], where + " inputs", [&](const std::string& k, const YAML::Node& v) {
        cs.classical_inputs[k] = scalar_value(v, where + " input " + k);
    });
    each_entry(n["quantum"], where + " quantum", [&](const std::string& k, const YAML::Node& v) {
        cs.quantum_inputs.emplace(k, gen_of(v, where + " quantum " + k));
    });
    each_entry(n["subroutines"], where + " subroutines", [&](const std::string& k, const YAML::Node& v) {
        cs.subroutine_inputs.emplace(k, HandleInput::parse(str_of(v, where + " subroutine " + k)));
    });
    each_entry(n["widths"], where + " widths", [&](const std::string& k, const YAML::Node& v) {
        cs.widths[k] = v.as<int>();
    });
    each_entry(n["expect"], where + " expect", [&](const std::string& k, const YAML::Node& v) {
        const MarkedVar* out = mark.output(k);
        if (!out) throw CaseError(where + ": '" + k + "' is not an output of " + mark.program);
        auto e = Expectation::parse(v.IsScalar() ? v.Scalar() : std::string());
        (out->is_quantum ? cs.expected_quantum : cs.expected_classical).emplace(k, std::move(e));
    });
    if (n["repetitions"]) cs.repetitions = n["repetitions"].as<int>();
    if (n["alpha"]) cs.alpha = n["alpha"].as<double>();
    return TestCase(mark, std::move(cs));
}

void emit_value(YAML::Emitter& out, const Value& v) {
    if (auto b = std::get_if<bool>(&v))
        out << *b;
    else if (auto i = std::get_if<std::int64_t>(&v))
        out << *i;
    else
        out << value_str(v);
}

}  // namespace

std::vector<std::string> SuiteDoc::coverage_gaps() const {
    std::vector<std::string> gaps;
    if (partitions.empty()) return gaps;
    std::set<std::vector<std::string>> claimed;
    for (const auto& c : cases)
        if (c.spec().classes.size() == partitions.size()) claimed.insert(c.spec().classes);
    if (criterion.value_or(Criterion::ECC) == Criterion::ACoC) {
        for (const auto& t : combine(partitions, Criterion::ACoC)) {
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < t.size(); ++i) labels.push_back(partitions[i].classes[t[i]].label);
            if (!claimed.count(labels)) {
                std::string s;
                for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i];
                gaps.push_back(s);
            }
        }
    } else {
        for (std::size_t i = 0; i < partitions.size(); ++i)
            for (const auto& c : partitions[i].classes) {
                bool seen = false;
                for (const auto& t : claimed) seen = seen || t[i] == c.label;
                if (!seen) gaps.push_back(partitions[i].variable + "=" + c.label);
            }
    }
    return gaps;
}

Suite Suite::from_yaml(const std::string& text) {
    Suite s;
    std::vector<YAML::Node> docs;
    try {
        docs = YAML::LoadAll(text);
    } catch (const YAML::Exception& e) {
        throw CaseError(std::string("suite file: ") + e.what());
    }
    for (const auto& d : docs) {
        if (d.IsNull()) continue;
        if (!d.IsMap()) throw CaseError("suite document must be a mapping");
        try {
            SuiteDoc doc;
            doc.subroutine = str_of(d["subroutine"], "subroutine");
            try {
                doc.mark = IOMark::parse(str_of(d["mark"], "mark"));
            } catch (const IOMarkError& e) {
                throw CaseError("mark of " + doc.subroutine + ": " + e.what());
            }
            if (d["criterion"]) doc.criterion = criterion_from(str_of(d["criterion"], "criterion"));
            if (const auto ps = d["partitions"]) {
                if (!ps.IsSequence()) throw CaseError("partitions must be a list");
                for (const auto& p : ps) doc.partitions.push_back(parse_partition(p));
            }
            std::set<std::string> names;
            if (const auto cs = d["cases"]) {
                if (!cs.IsSequence()) throw CaseError("cases must be a list");
                for (const auto& c : cs) {
                    TestCase tc = parse_case(c, doc.mark);
                    if (!names.insert(tc.name()).second) throw CaseError("repeated case name '" + tc.name() + "'");
                    const auto& labels = tc.spec().classes;
                    if (!labels.empty()) {
                        if (labels.size() != doc.partitions.size())
                            throw CaseError("case '" + tc.name() + "' lists " + std::to_string(labels.size()) +
                                            " classes for " + std::to_string(doc.partitions.size()) + " partitions");
                        for (std::size_t i = 0; i < labels.size(); ++i) {
                            const auto& cl = doc.partitions[i].classes;
                            if (std::none_of(cl.begin(), cl.end(), [&](const EquivClass& e) { return e.label == labels[i]; }))
                                throw CaseError("case '" + tc.name() + "': no class '" + labels[i] + "' for " +
                                                doc.partitions[i].variable);
                        }
                    }
                    doc.cases.push_back(std::move(tc));
                }
            }
            s.docs.push_back(std::move(doc));
        } catch (const YAML::Exception& e) {
            throw CaseError(std::string("suite file: ") + e.what());
        }
    }
    return s;
}

Suite Suite::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CaseError("cannot open suite file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_yaml(ss.str());
}

std::string Suite::to_yaml() const {
    std::string text;
    for (const auto& doc : docs) {
        YAML::Emitter out;
        out << YAML::BeginMap;
        out << YAML::Key << "subroutine" << YAML::Value << doc.subroutine;
        out << YAML::Key << "mark" << YAML::Value << YAML::DoubleQuoted << doc.mark.str();
        if (doc.criterion) out << YAML::Key << "criterion" << YAML::Value << std::string(criterion_name(*doc.criterion));
        if (!doc.partitions.empty()) {
            out << YAML::Key << "partitions" << YAML::Value << YAML::BeginSeq;
            for (const auto& p : doc.partitions) {
                out << YAML::BeginMap << YAML::Key << "variable" << YAML::Value << p.variable;
                out << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
                for (const auto& c : p.classes) {
                    out << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << c.label;
                    if (!c.literals.empty()) {
                        out << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
                        for (const auto& v : c.literals) emit_value(out, v);
                        out << YAML::EndSeq;
                    }
                    if (c.sampler) out << YAML::Key << "generator" << YAML::Value << YAML::DoubleQuoted << c.sampler->str();
                    out << YAML::EndMap;
                }
                out << YAML::EndSeq << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        out << YAML::Key << "cases" << YAML::Value << YAML::BeginSeq;
        for (const auto& tc : doc.cases) {
            const CaseSpec& cs = tc.spec();
            out << YAML::BeginMap;
            out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << cs.name;
            if (!cs.classes.empty()) {
                out << YAML::Key << "classes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
                for (const auto& l : cs.classes) out << YAML::DoubleQuoted << l;
                out << YAML::EndSeq;
            }
            auto strmap = [&](const char* key, const auto& m, auto render) {
                if (m.empty()) return;
                out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginMap;
                for (const auto& [k, v] : m) {
                    out << YAML::Key << k << YAML::Value;
                    render(v);
                }
                out << YAML::EndMap;
            };
            strmap("inputs", cs.classical_inputs, [&](const Value& v) { emit_value(out, v); });
            strmap("quantum", cs.quantum_inputs, [&](const GeneratorSpec& g) { out << YAML::DoubleQuoted << g.str(); });
            strmap("subroutines", cs.subroutine_inputs, [&](const HandleInput& h) { out << YAML::DoubleQuoted << h.str(); });
            strmap("widths", cs.widths, [&](int w) { out << w; });
            std::map<std::string, Expectation> all = cs.expected_classical;
            all.insert(cs.expected_quantum.begin(), cs.expected_quantum.end());
            strmap("expect", all, [&](const Expectation& e) { out << YAML::DoubleQuoted << e.str(); });
            out << YAML::Key << "repetitions" << YAML::Value << cs.repetitions;
            if (cs.alpha != 0.01) out << YAML::Key << "alpha" << YAML::Value << cs.alpha;
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
        out << YAML::EndMap;
        text += "---\n";
        text += out.c_str();
        text += "\n";
    }
    return text;
}

std::size_t Suite::case_count() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.cases.size();
    return n;
}

std::vector<CaseRecord> run_suite(const Suite& suite, const Library& lib, std::uint64_t seed) {
    std::vector<CaseRecord> out;
    for (std::size_t d = 0; d < suite.docs.size(); ++d) {
        const auto& doc = suite.docs[d];
        SubPtr sub = lib.find(doc.subroutine);
        if (!sub) throw CaseError("unknown subroutine '" + doc.subroutine + "'");
        for (std::size_t k = 0; k < doc.cases.size(); ++k) {
            Rng rng(Rng::derive(seed, {d, k}));
            out.push_back({doc.subroutine, doc.cases[k].name(), run_case(lib, *sub, doc.cases[k], rng)});
        }
    }
    return out;
}

}  // namespace qtk
