#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtk/harness/harness.hpp"
#include "qtk/qir/serialize.hpp"

using namespace qtk;

namespace {

// Exit codes: 0 all pass, 1 failures, 2 usage or configuration error.
constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text, bool append = false) {
    std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json") throw UsageError("unknown format '" + format + "' (csv or json)");
}

std::set<MutationKind> parse_kinds(const std::string& list) {
    std::set<MutationKind> out;
    std::stringstream ss(list);
    std::string k;
    while (std::getline(ss, k, ','))
        if (!k.empty()) out.insert(mutation_kind_from(k));
    if (out.empty()) throw UsageError("no mutation kinds given");
    return out;
}

SuiteSummary summary_from_json(const nlohmann::json& j) {
    std::vector<CaseRecord> records;
    for (const auto& c : j.at("cases")) {
        CheckVerdict v;
        v.check = c.value("check", "");
        v.target = c.value("target", "");
        v.passed = c.at("passed").get<bool>();
        v.shots = c.value("shots", 0);
        v.statistic = c.value("statistic", 0.0);
        v.threshold = c.value("threshold", 0.0);
        if (c.contains("witness") && c["witness"].is_string()) v.witness = c["witness"].get<std::string>();
        records.push_back(CaseRecord{c.at("subroutine").get<std::string>(), c.at("case").get<std::string>(), v});
    }
    return suite_report(std::move(records));
}

int emit_suite(const SuiteSummary& s, const std::string& format) {
    if (format == "json")
        std::cout << s.to_json().dump(2) << "\n";
    else
        std::cout << s.to_csv();
    return s.failed > 0 ? kFail : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unit testing and mutation experiments for quantum subroutines"};
    app.require_subcommand(1);
    int code = kOk;

    auto* list = app.add_subcommand("list", "List the benchmark catalog");
    bool list_long = false;
    list->add_flag("-l,--long", list_long, "Show IO type and mark");
    list->callback([&] {
        for (const auto& e : catalog().entries()) {
            if (list_long)
                std::cout << e.name << "\t" << io_type_name(e.io_type) << "\t" << e.io_mark.str() << "\n";
            else
                std::cout << e.name << "\n";
        }
    });

    auto* suite = app.add_subcommand("suite", "Run or export unit-test suites");
    suite->require_subcommand(1);
    auto* suite_run = suite->add_subcommand("run", "Run a suite file against the catalog library");
    std::string suite_file, suite_format = "csv", suite_raw;
    std::uint64_t suite_seed = 0;
    suite_run->add_option("file", suite_file, "Suite file (YAML)")->required();
    suite_run->add_option("--seed", suite_seed, "Master seed");
    suite_run->add_option("--format", suite_format, "csv or json");
    suite_run->add_option("--raw", suite_raw, "Also write the raw JSON report here");
    suite_run->callback([&] {
        check_format(suite_format);
        Suite s = Suite::load(suite_file);
        auto summary = suite_report(run_suite(s, catalog().library(), suite_seed));
        if (!suite_raw.empty()) {
            auto j = summary.to_json();
            j["kind"] = "suite-report";
            j["seed"] = suite_seed;
            write_file(suite_raw, j.dump(2) + "\n");
        }
        code = emit_suite(summary, suite_format);
    });
    auto* suite_export = suite->add_subcommand("export", "Print the default suites of the catalog");
    std::vector<std::string> export_names;
    std::string export_out;
    suite_export->add_option("benchmarks", export_names, "Benchmarks to export (default all)");
    suite_export->add_option("--out", export_out, "Write to this file instead of stdout");
    suite_export->callback([&] {
        Suite s;
        if (export_names.empty())
            s = catalog().default_suites();
        else
            for (const auto& n : export_names) s.docs.push_back(catalog().get(n).default_suite);
        if (export_out.empty())
            std::cout << s.to_yaml();
        else
            write_file(export_out, s.to_yaml());
    });

    auto* mutate = app.add_subcommand("mutate", "Write a mutant corpus for a benchmark");
    std::string mutate_bench, mutate_kinds = "GM,SM,CM,MM", mutate_out;
    std::uint64_t mutate_seed = 0;
    int mutate_limit = 50;
    mutate->add_option("benchmark", mutate_bench, "Benchmark name")->required();
    mutate->add_option("--kinds", mutate_kinds, "Comma-separated mutation kinds");
    mutate->add_option("--seed", mutate_seed, "Enumeration seed");
    mutate->add_option("--limit", mutate_limit, "Mutants per kind")->check(CLI::PositiveNumber);
    mutate->add_option("--out", mutate_out, "Corpus directory")->required();
    mutate->callback([&] {
        const auto& e = catalog().get(mutate_bench);
        auto kinds = parse_kinds(mutate_kinds);
        Rng rng(mutate_seed);
        auto mutants = enumerate_mutants(*e.subroutine, catalog().library(), kinds, mutate_limit, rng);
        std::filesystem::create_directories(mutate_out);
        write_corpus(mutants, mutate_out);
        std::cout << mutants.size() << " mutants of " << e.name << " written to " << mutate_out << "\n";
    });

    auto* experiment = app.add_subcommand("experiment", "Run a trigger-rate campaign");
    std::string exp_config, exp_out;
    int exp_parallel = 0;
    bool exp_append = false;
    experiment->add_option("config", exp_config, "Campaign config file")->required();
    experiment->add_option("--out", exp_out, "Write <out>.csv and the <out>.json sidecar");
    experiment->add_option("-j,--parallelism", exp_parallel, "Override the worker count");
    experiment->add_flag("--append", exp_append, "Append rows to an existing <out>.csv");
    experiment->callback([&] {
        auto cfg = ExperimentConfig::load(exp_config);
        if (exp_parallel > 0) cfg.parallelism = exp_parallel;
        auto rep = run_experiment(cfg);
        std::string csv = rep.to_csv();
        if (exp_out.empty()) {
            std::cout << csv;
            return;
        }
        const std::string csv_path = exp_out + ".csv";
        if (exp_append && std::filesystem::exists(csv_path))
            write_file(csv_path, csv.substr(csv.find('\n') + 1), true);
        else
            write_file(csv_path, csv);
        write_file(exp_out + ".json", rep.to_json().dump(2) + "\n");
        std::cout << rep.rows.size() << " rows written to " << csv_path << "\n";
    });

    auto* dump = app.add_subcommand("dump", "Print the IR text of a benchmark");
    std::string dump_bench;
    bool dump_library = false;
    dump->add_option("benchmark", dump_bench, "Benchmark name");
    dump->add_flag("--library", dump_library, "Print the whole catalog library");
    dump->callback([&] {
        if (dump_library)
            std::cout << library_to_text(catalog().library());
        else if (dump_bench.empty())
            throw UsageError("dump needs a benchmark name or --library");
        else
            std::cout << to_text(*catalog().get(dump_bench).subroutine);
    });

    auto* report = app.add_subcommand("report", "Render a raw JSON report");
    std::string report_raw, report_format = "csv";
    report->add_option("raw", report_raw, "Experiment sidecar or suite --raw output")->required();
    report->add_option("--format", report_format, "csv or json");
    report->callback([&] {
        check_format(report_format);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(report_raw));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("'" + report_raw + "' is not JSON: " + e.what());
        }
        const std::string kind = j.value("kind", "");
        if (kind == "trigger-report") {
            auto rep = TriggerReport::from_json(j);
            std::cout << (report_format == "json" ? rep.to_json().dump(2) + "\n" : rep.to_csv());
        } else if (kind == "suite-report") {
            code = emit_suite(summary_from_json(j), report_format);
        } else {
            throw UsageError("'" + report_raw + "' is neither a trigger report nor a suite report");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "qtk: " << e.what() << "\n";
        return kUsage;
    }
    return code;
}
