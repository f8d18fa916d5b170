#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtk/benchsuite/benchsuite.hpp"

namespace qtk {

class ConfigError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Worker count from QTK_PARALLELISM, else the hardware concurrency (at least 1).
int default_parallelism();

/// A trigger-rate campaign. The file form is one `key = value` per line;
/// `#` starts a comment, lists are comma separated and may be wrapped in
/// brackets with quoted items, so simple TOML files parse too.
///
///   benchmarks  = QFT, Reverse        (required)
///   scales      = 3, 4                (required unless every benchmark has scale.<name>)
///   scale.QFT   = 6                   (per-benchmark override)
///   corpus.QFT  = data/corpus/QFT     (use a written corpus instead of enumerating;
///                                      relative paths resolve against the config file)
///   kinds       = GM, SM, CM, MM      (default all)
///   limit       = 50                  (mutants per kind, default 50)
///   inputs      = CI, RTI, CSI        (default all three)
///   trials      = auto                (per mutant and input; auto = 100 n)
///   seed        = 2024                (default 0)
///   parallelism = 8                   (default default_parallelism())
struct ExperimentConfig {
    std::vector<std::string> benchmarks;
    std::vector<int> scales;
    std::map<std::string, std::vector<int>> scale_overrides;
    std::map<std::string, std::string> corpora;
    std::set<MutationKind> kinds{MutationKind::GM, MutationKind::SM, MutationKind::CM, MutationKind::MM};
    int limit = 50;
    std::vector<InputKind> inputs{InputKind::CI, InputKind::RTI, InputKind::CSI};
    std::optional<int> trials;
    std::uint64_t seed = 0;
    int parallelism = 1;

    /// Throws ConfigError with the offending line.
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    /// Canonical file form; parse(str()) reproduces the config.
    std::string str() const;
    /// Every field except parallelism, which never affects results.
    nlohmann::json to_json() const;

    std::vector<int> scales_for(const std::string& benchmark) const;
    int trials_for(int n) const { return trials ? *trials : 100 * n; }

    /// Unknown benchmarks, benchmarks without a quantum input, scales the
    /// simulator cannot hold and non-positive counts throw ConfigError.
    void validate(const Catalog& cat = catalog()) const;
};

struct TriggerRow {
    std::string benchmark;
    int n = 0;
    MutationKind kind = MutationKind::GM;
    InputKind input = InputKind::CI;
    int mutants = 0;
    std::int64_t trials = 0;
    std::int64_t triggers = 0;

    double rate() const { return trials ? static_cast<double>(triggers) / static_cast<double>(trials) : 0.0; }
    bool operator==(const TriggerRow&) const = default;
};

struct MutantOutcome {
    std::string benchmark;
    int n = 0;
    std::string id;
    InputKind input = InputKind::CI;
    int trials = 0;
    int triggers = 0;
    bool operator==(const MutantOutcome&) const = default;
};

struct TriggerReport {
    ExperimentConfig config;
    /// One row per benchmark, scale, mutation kind and input kind with at least one mutant.
    std::vector<TriggerRow> rows;
    std::vector<MutantOutcome> outcomes;

    /// Header `benchmark,n,kind,input,mutants,trials,triggers,rate`.
    std::string to_csv() const;
    /// Sidecar: config, rows and per-mutant outcomes.
    nlohmann::json to_json() const;
    static TriggerReport from_json(const nlohmann::json& j);
};

/// Enumerates mutants per benchmark and scale, then runs the trigger trials
/// on a pool of cfg.parallelism workers. Trial t of mutant m on input kind k
/// draws from Rng::derive(seed, {hash(benchmark/n/m), k, t}), so the report
/// does not depend on scheduling.
TriggerReport run_experiment(const ExperimentConfig& cfg, const Catalog& cat = catalog());

/// Shortest decimal that round-trips.
std::string format_rate(double r);

}  // namespace qtk
