#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtk/testkit/testkit.hpp"

namespace qtk {

/// One subroutine's unit-test design.
struct SuiteDoc {
    std::string subroutine;
    IOMark mark;
    std::optional<Criterion> criterion;
    std::vector<Partition> partitions;
    std::vector<TestCase> cases;

    /// Class tuples (ACoC) or single classes (ECC) that no case claims,
    /// rendered as `label,label` or `variable=label`.
    std::vector<std::string> coverage_gaps() const;
};

/// A suite file is a stream of YAML documents, one per subroutine:
///
///   subroutine: QFT
///   mark: "QFT : (n, q:qs) -> (q:qs'^BE)"
///   criterion: ACoC
///   partitions:
///     - variable: n
///       classes:
///         - {label: "n=1", values: [1]}
///     - variable: qs
///       classes:
///         - {label: C, generator: "sample(kind=CI, n=1)"}
///   cases:
///     - name: "n=1,C"
///       classes: ["n=1", C]
///       inputs: {n: 1}
///       quantum: {qs: "ket_x(n=1, x=0)"}
///       subroutines: {}
///       widths: {}
///       expect: {qs: "qft(j=0)"}
///       repetitions: 10
///       alpha: 0.01
struct Suite {
    std::vector<SuiteDoc> docs;

    static Suite from_yaml(const std::string& text);
    static Suite load(const std::string& path);
    std::string to_yaml() const;
    std::size_t case_count() const;
};

/// Every case of every document; case k of document d draws from
/// Rng::derive(seed, {d, k}).
std::vector<CaseRecord> run_suite(const Suite& suite, const Library& lib, std::uint64_t seed);

}  // namespace qtk
