#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtk/checkers/checkers.hpp"
#include "qtk/stateprep/stateprep.hpp"
#include "qtk/testkit/iomark.hpp"

namespace qtk {

class CaseError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- partitions

struct EquivClass {
    std::string label;
    std::vector<Value> literals;            // classical members
    std::optional<GeneratorSpec> sampler;   // quantum members
};

struct Partition {
    std::string variable;
    std::vector<EquivClass> classes;
    /// Throws CaseError for an empty class list, empty classes or repeated labels.
    void validate() const;
};

enum class Criterion { ACoC, ECC };
std::string_view criterion_name(Criterion c);
Criterion criterion_from(std::string_view s);

/// One class index per partition.
using ClassTuple = std::vector<std::size_t>;

/// ACoC: the full product, first partition varying slowest. ECC: row i takes
/// class min(i, size-1) of every partition.
std::vector<ClassTuple> combine(const std::vector<Partition>& partitions, Criterion criterion);

// ---------------------------------------------------------------- expectations

/// Expected value of one output, written as
///   literal            23, true, 0.5
///   approx(v, tol)     |value - v| <= tol
///   range(lo, hi)      lo <= value <= hi
///   dist([o, p], ...)  outcome distribution over all repetitions
///   freq(v, f)         value occurs in at least a fraction f of repetitions
/// and for quantum outputs additionally
///   state(<generator>) the output equals the generated state
///   qft(j=...)         the output is the Fourier image of |j>
///   differs(<generator>) the output is detectably not the generated state
///   overlap(<check>, p) undoing <check> reads all-zero with probability p
/// A quantum output compared against a literal, range, dist or freq is
/// measured and read as an integer (least significant first for ^LE).
struct Expectation {
    enum class Kind { Equals, Approx, Range, Dist, Freq, State, Qft, Differs, Overlap };
    Kind kind = Kind::Equals;
    Value value{std::int64_t{0}};
    double tolerance = 0;
    std::int64_t lo = 0, hi = 0;
    std::map<std::uint64_t, double> dist;
    double fraction = 0;
    std::optional<GeneratorSpec> generator;  // State, Differs, Overlap with a generator
    std::uint64_t j = 0;                     // Qft, Overlap with qft
    bool overlap_qft = false;

    static Expectation parse(std::string_view text);
    std::string str() const;
    /// State, Qft, Differs and Overlap need a quantum output.
    bool quantum_only() const;
};

// ---------------------------------------------------------------- test cases

struct HandleInput {
    std::string library_name;               // a subroutine from the library, or
    std::optional<GeneratorSpec> generator;  // a state generator passed as a subroutine
    static HandleInput parse(std::string_view text);
    std::string str() const;
};

struct CaseSpec {
    std::string name;
    std::vector<std::string> classes;  // equivalence-class labels, one per partition
    std::map<std::string, Value> classical_inputs;
    std::map<std::string, GeneratorSpec> quantum_inputs;
    std::map<std::string, HandleInput> subroutine_inputs;
    std::map<std::string, int> widths;  // registers without a declared length
    std::map<std::string, Expectation> expected_classical;
    std::map<std::string, Expectation> expected_quantum;
    int repetitions = 1;
    double alpha = 0.01;
};

/// A case checked against its IO mark on construction: every quantum input
/// has a generator, expectations name outputs of the right kind, and
/// repetitions and alpha are in range.
class TestCase {
public:
    TestCase(IOMark mark, CaseSpec spec);
    const IOMark& mark() const { return mark_; }
    const CaseSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }

private:
    IOMark mark_;
    CaseSpec spec_;
};

/// Runs `repetitions` executions on fresh registers. The verdict's shots
/// field counts executions; faults fail the case with the fault as witness.
CheckVerdict run_case(const Library& lib, const Subroutine& sub, const TestCase& tc, Rng& rng);
/// Looks the subroutine up by the mark's program name.
CheckVerdict run_case(const Library& lib, const TestCase& tc, Rng& rng);

// ---------------------------------------------------------------- reports

struct CaseRecord {
    std::string subroutine;
    std::string case_name;
    CheckVerdict verdict;
};

struct SuiteSummary {
    struct PerSubroutine {
        int passed = 0;
        int failed = 0;
        std::optional<std::string> first_witness;
    };
    std::vector<CaseRecord> records;
    std::map<std::string, PerSubroutine> per_subroutine;
    int passed = 0;
    int failed = 0;

    /// "pass", "fail" or "no cases".
    std::string status() const;
    /// Header `subroutine,case,verdict,shots,witness`.
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

SuiteSummary suite_report(std::vector<CaseRecord> records);

}  // namespace qtk
