#include "qtk/harness/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qtk {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_list(std::string v) {
    if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = unquote(trim(item));
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw ConfigError(where + ": expected an integer, got '" + s + "'");
    return v;
}

std::vector<int> parse_ints(const std::string& v, const std::string& where) {
    std::vector<int> out;
    for (const auto& s : split_list(v)) out.push_back(static_cast<int>(parse_int(s, where)));
    return out;
}

template <class T>
std::string join(const std::vector<T>& xs, auto&& render) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += render(xs[i]);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

int default_parallelism() {
    if (const char* env = std::getenv("QTK_PARALLELISM")) {
        int v = 0;
        auto [p, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
        if (ec == std::errc{} && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_rate(double r) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, r);
    return std::string(buf, p);
}

// ---------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    cfg.parallelism = default_parallelism();
    std::set<std::string> seen;
    std::stringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        std::string key = unquote(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
        try {
            if (key == "benchmarks") {
                cfg.benchmarks = split_list(value);
            } else if (key == "scales") {
                cfg.scales = parse_ints(value, where);
            } else if (key.starts_with("scale.")) {
                cfg.scale_overrides[key.substr(6)] = parse_ints(value, where);
            } else if (key.starts_with("corpus.")) {
                cfg.corpora[key.substr(7)] = unquote(value);
            } else if (key == "kinds") {
                cfg.kinds.clear();
                for (const auto& k : split_list(value)) cfg.kinds.insert(mutation_kind_from(k));
            } else if (key == "limit") {
                cfg.limit = static_cast<int>(parse_int(unquote(value), where));
            } else if (key == "inputs") {
                cfg.inputs.clear();
                for (const auto& k : split_list(value)) {
                    InputKind kind = input_kind_from(k);
                    if (std::find(cfg.inputs.begin(), cfg.inputs.end(), kind) == cfg.inputs.end()) cfg.inputs.push_back(kind);
                }
            } else if (key == "trials") {
                std::string v = unquote(value);
                if (v == "auto")
                    cfg.trials.reset();
                else
                    cfg.trials = static_cast<int>(parse_int(v, where));
            } else if (key == "seed") {
                std::string v = unquote(value);
                std::uint64_t s = 0;
                auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
                if (ec != std::errc{} || p != v.data() + v.size()) throw ConfigError(where + ": bad seed '" + v + "'");
                cfg.seed = s;
            } else if (key == "parallelism") {
                cfg.parallelism = static_cast<int>(parse_int(unquote(value), where));
            } else {
                throw ConfigError(where + ": unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    auto cfg = parse(ss.str());
    const auto base = std::filesystem::path(path).parent_path();
    for (auto& [b, dir] : cfg.corpora)
        if (std::filesystem::path(dir).is_relative()) dir = (base / dir).lexically_normal().string();
    return cfg;
}

std::string ExperimentConfig::str() const {
    auto ints = [](const std::vector<int>& v) { return join(v, [](int x) { return std::to_string(x); }); };
    std::ostringstream out;
    out << "benchmarks = " << join(benchmarks, [](const std::string& s) { return s; }) << "\n";
    if (!scales.empty()) out << "scales = " << ints(scales) << "\n";
    for (const auto& [b, s] : scale_overrides) out << "scale." << b << " = " << ints(s) << "\n";
    for (const auto& [b, d] : corpora) out << "corpus." << b << " = " << d << "\n";
    std::vector<MutationKind> ks(kinds.begin(), kinds.end());
    out << "kinds = " << join(ks, [](MutationKind k) { return std::string(mutation_kind_name(k)); }) << "\n";
    out << "limit = " << limit << "\n";
    out << "inputs = " << join(inputs, [](InputKind k) { return std::string(input_kind_name(k)); }) << "\n";
    out << "trials = " << (trials ? std::to_string(*trials) : "auto") << "\n";
    out << "seed = " << seed << "\n";
    out << "parallelism = " << parallelism << "\n";
    return out.str();
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["benchmarks"] = benchmarks;
    j["scales"] = scales;
    j["scale_overrides"] = scale_overrides;
    j["corpora"] = corpora;
    auto& ks = j["kinds"] = nlohmann::json::array();
    for (auto k : kinds) ks.push_back(mutation_kind_name(k));
    j["limit"] = limit;
    auto& is = j["inputs"] = nlohmann::json::array();
    for (auto k : inputs) is.push_back(input_kind_name(k));
    j["trials"] = trials ? nlohmann::json(*trials) : nlohmann::json("auto");
    j["seed"] = seed;
    return j;
}

std::vector<int> ExperimentConfig::scales_for(const std::string& benchmark) const {
    if (auto it = scale_overrides.find(benchmark); it != scale_overrides.end()) return it->second;
    return scales;
}

void ExperimentConfig::validate(const Catalog& cat) const {
    if (benchmarks.empty()) throw ConfigError("no benchmarks given");
    if (kinds.empty()) throw ConfigError("no mutation kinds given");
    if (inputs.empty()) throw ConfigError("no input kinds given");
    if (limit < 1) throw ConfigError("limit must be positive");
    if (trials && *trials < 1) throw ConfigError("trials must be positive");
    if (parallelism < 1) throw ConfigError("parallelism must be positive");
    for (auto k : inputs)
        if (k != InputKind::CI && k != InputKind::RTI && k != InputKind::CSI) throw ConfigError("input kinds are CI, RTI and CSI");
    for (const auto& [b, s] : scale_overrides)
        if (std::find(benchmarks.begin(), benchmarks.end(), b) == benchmarks.end())
            throw ConfigError("scale." + b + " names a benchmark that is not in the campaign");
    for (const auto& [b, d] : corpora) {
        if (std::find(benchmarks.begin(), benchmarks.end(), b) == benchmarks.end())
            throw ConfigError("corpus." + b + " names a benchmark that is not in the campaign");
        if (!std::filesystem::is_regular_file(std::filesystem::path(d) / "manifest.csv"))
            throw ConfigError("corpus." + b + ": no manifest.csv in '" + d + "'");
    }
    for (const auto& name : benchmarks) {
        const BenchmarkEntry* e = cat.find(name);
        if (!e) throw ConfigError("unknown benchmark '" + name + "'");
        if (!e->has_quantum_input()) throw ConfigError("benchmark '" + name + "' has no quantum input to prepare");
        auto ns = scales_for(name);
        if (ns.empty()) throw ConfigError("no scales for benchmark '" + name + "'");
        for (int n : ns) {
            if (n < 1) throw ConfigError("scale " + std::to_string(n) + " for '" + name + "' must be positive");
            int width = 0;
            try {
                width = e->bind(n).n_qubits;
            } catch (const std::exception& ex) {
                throw ConfigError("cannot bind '" + name + "' at n=" + std::to_string(n) + ": " + ex.what());
            }
            if (width > kMaxQubits)
                throw ConfigError("'" + name + "' at n=" + std::to_string(n) + " needs " + std::to_string(width) +
                                  " qubits, above the simulator cap of " + std::to_string(kMaxQubits));
        }
    }
}

// ---------------------------------------------------------------- report

std::string TriggerReport::to_csv() const {
    std::ostringstream out;
    out << "benchmark,n,kind,input,mutants,trials,triggers,rate\n";
    for (const auto& r : rows)
        out << csv_field(r.benchmark) << ',' << r.n << ',' << mutation_kind_name(r.kind) << ',' << input_kind_name(r.input) << ','
            << r.mutants << ',' << r.trials << ',' << r.triggers << ',' << format_rate(r.rate()) << '\n';
    return out.str();
}

nlohmann::json TriggerReport::to_json() const {
    nlohmann::json j;
    j["kind"] = "trigger-report";
    j["config"] = config.to_json();
    auto& rs = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        rs.push_back({{"benchmark", r.benchmark},
                      {"n", r.n},
                      {"kind", mutation_kind_name(r.kind)},
                      {"input", input_kind_name(r.input)},
                      {"mutants", r.mutants},
                      {"trials", r.trials},
                      {"triggers", r.triggers},
                      {"rate", r.rate()}});
    auto& os = j["mutants"] = nlohmann::json::array();
    for (const auto& o : outcomes)
        os.push_back({{"benchmark", o.benchmark},
                      {"n", o.n},
                      {"id", o.id},
                      {"input", input_kind_name(o.input)},
                      {"trials", o.trials},
                      {"triggers", o.triggers}});
    return j;
}

TriggerReport TriggerReport::from_json(const nlohmann::json& j) {
    try {
        TriggerReport rep;
        const auto& c = j.at("config");
        auto& cfg = rep.config;
        cfg.benchmarks = c.at("benchmarks").get<std::vector<std::string>>();
        cfg.scales = c.at("scales").get<std::vector<int>>();
        cfg.scale_overrides = c.at("scale_overrides").get<std::map<std::string, std::vector<int>>>();
        cfg.corpora = c.value("corpora", std::map<std::string, std::string>{});
        cfg.kinds.clear();
        for (const auto& k : c.at("kinds")) cfg.kinds.insert(mutation_kind_from(k.get<std::string>()));
        cfg.limit = c.at("limit").get<int>();
        cfg.inputs.clear();
        for (const auto& k : c.at("inputs")) cfg.inputs.push_back(input_kind_from(k.get<std::string>()));
        if (c.at("trials").is_number()) cfg.trials = c.at("trials").get<int>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        for (const auto& r : j.at("rows"))
            rep.rows.push_back(TriggerRow{r.at("benchmark").get<std::string>(), r.at("n").get<int>(),
                                          mutation_kind_from(r.at("kind").get<std::string>()),
                                          input_kind_from(r.at("input").get<std::string>()), r.at("mutants").get<int>(),
                                          r.at("trials").get<std::int64_t>(), r.at("triggers").get<std::int64_t>()});
        for (const auto& o : j.at("mutants"))
            rep.outcomes.push_back(MutantOutcome{o.at("benchmark").get<std::string>(), o.at("n").get<int>(),
                                                 o.at("id").get<std::string>(), input_kind_from(o.at("input").get<std::string>()),
                                                 o.at("trials").get<int>(), o.at("triggers").get<int>()});
        return rep;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed trigger report: ") + e.what());
    }
}

// ---------------------------------------------------------------- campaign

TriggerReport run_experiment(const ExperimentConfig& cfg, const Catalog& cat) {
    cfg.validate(cat);

    struct Group {
        std::string benchmark;
        int n;
        TriggerOracle oracle;
        std::vector<Mutant> mutants;
    };
    struct Item {
        std::size_t group;
        std::size_t mutant;
        std::size_t input;
        int trials;
        int triggers = 0;
    };

    std::vector<Group> groups;
    for (const auto& name : cfg.benchmarks) {
        const BenchmarkEntry& e = cat.get(name);
        std::optional<std::vector<Mutant>> shipped;
        if (auto it = cfg.corpora.find(name); it != cfg.corpora.end()) {
            std::vector<Mutant> all;
            try {
                all = read_corpus(it->second);
            } catch (const std::exception& ex) {
                throw ConfigError("corpus." + name + ": " + ex.what());
            }
            shipped.emplace();
            std::map<MutationKind, int> taken;
            for (auto& m : all) {
                if (m.base != name) throw ConfigError("corpus." + name + " holds mutants of '" + m.base + "'");
                if (cfg.kinds.count(m.kind) && taken[m.kind]++ < cfg.limit) shipped->push_back(std::move(m));
            }
        }
        for (int n : cfg.scales_for(name)) {
            Invocation inv = e.bind(n);
            std::vector<Mutant> mutants;
            if (shipped) {
                mutants = *shipped;
            } else {
                Rng mrng(Rng::derive(cfg.seed, {Rng::hash(name), static_cast<std::uint64_t>(n)}));
                mutants = enumerate_mutants(*e.subroutine, cat.library(), cfg.kinds, cfg.limit, mrng);
            }
            groups.push_back(Group{name, n, TriggerOracle(inv), std::move(mutants)});
        }
    }

    std::vector<Item> items;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t m = 0; m < groups[g].mutants.size(); ++m)
            for (std::size_t i = 0; i < cfg.inputs.size(); ++i) items.push_back(Item{g, m, i, cfg.trials_for(groups[g].n)});

    auto mutant_key = [&](const Item& it) {
        const Group& g = groups[it.group];
        return g.benchmark + "/" + std::to_string(g.n) + "/" + g.mutants[it.mutant].id(it.mutant);
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < items.size(); k = next++) {
            Item& it = items[k];
            const Group& g = groups[it.group];
            const Mutant& m = g.mutants[it.mutant];
            const std::uint64_t key = Rng::hash(mutant_key(it));
            const InputKind kind = cfg.inputs[it.input];
            int hits = 0;
            for (int t = 0; t < it.trials; ++t) {
                Rng rng(Rng::derive(cfg.seed, {key, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(t)}));
                if (trigger_trial(m, g.oracle, kind, rng)) ++hits;
            }
            it.triggers = hits;
        }
    };
    const int workers = std::min<int>(cfg.parallelism, static_cast<int>(std::max<std::size_t>(items.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }

    TriggerReport rep;
    rep.config = cfg;
    std::map<std::tuple<std::size_t, MutationKind, std::size_t>, std::size_t> row_of;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (MutationKind mk : cfg.kinds) {
            int count = 0;
            for (const auto& m : groups[g].mutants) count += m.kind == mk;
            if (count == 0) continue;
            for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
                row_of[{g, mk, i}] = rep.rows.size();
                rep.rows.push_back(TriggerRow{groups[g].benchmark, groups[g].n, mk, cfg.inputs[i], count, 0, 0});
            }
        }
    for (const auto& it : items) {
        const Group& g = groups[it.group];
        const Mutant& m = g.mutants[it.mutant];
        TriggerRow& row = rep.rows[row_of.at({it.group, m.kind, it.input})];
        row.trials += it.trials;
        row.triggers += it.triggers;
        rep.outcomes.push_back(MutantOutcome{g.benchmark, g.n, m.id(it.mutant), cfg.inputs[it.input], it.trials, it.triggers});
    }
    return rep;
}

}  // namespace qtk
