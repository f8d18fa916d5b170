#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qtk/checkers/checkers.hpp"

namespace qtk {

enum class MutationKind { GM, SM, CM, MM };
enum class EditKind { Add, Remove, Replace };

std::string_view mutation_kind_name(MutationKind k);
MutationKind mutation_kind_from(std::string_view s);
std::string_view edit_kind_name(EditKind e);
const std::vector<MutationKind>& all_mutation_kinds();

/// A single-edit derivative of a library subroutine.
struct Mutant {
    std::string base;
    MutationKind kind = MutationKind::GM;
    EditKind edit = EditKind::Add;
    std::string site;     // Sub:path of the edited statement (insertion point for adds)
    std::string payload;  // stmt_record of the inserted or replacing statement, or of the removed one
    SubPtr program;
    std::uint64_t seed = 0;

    /// `base,kind,edit,site,payload,seed` with CSV quoting.
    std::string manifest_line() const;
    /// Stable identifier `base-kind-index` given the position in a corpus.
    std::string id(std::size_t index) const;
};

/// Up to `limit_per_kind` mutants of each requested kind. Sites are drawn
/// uniformly among the eligible ones; candidates failing validate(), no-op
/// edits and duplicates are discarded. A kind without eligible sites yields
/// nothing. Each kind draws from its own stream of `rng`.
std::vector<Mutant> enumerate_mutants(const Subroutine& sub, const Library& lib,
                                      const std::set<MutationKind>& kinds, int limit_per_kind, Rng& rng);

/// Corpus directory layout: manifest.csv plus one `<id>.qir` per mutant.
void write_corpus(const std::vector<Mutant>& mutants, const std::string& dir);
std::string corpus_manifest(const std::vector<Mutant>& mutants);
/// Reads a directory written by write_corpus. Throws std::runtime_error on
/// missing files and std::invalid_argument on a malformed manifest.
std::vector<Mutant> read_corpus(const std::string& dir);

/// Single-shot comparison of a program against a correct oracle bound to
/// concrete arguments.
class TriggerOracle {
public:
    explicit TriggerOracle(Invocation oracle);

    const Invocation& invocation() const { return oracle_; }
    /// True when the oracle has an adjoint, so trials use prepare, run,
    /// oracle inverse, unprepare and measure.
    bool reversible() const { return inverse_ != nullptr; }

    /// Samples one input of `kind` on io_in. Reversible oracles: trigger iff
    /// io_in does not read all-zero after undoing. Otherwise mutant and oracle
    /// run with the same random stream and trigger iff their classical
    /// outputs or io_out readings differ. Runtime faults are triggers.
    bool trial(const SubPtr& program, InputKind kind, Rng& rng) const;

private:
    Invocation oracle_;
    SubPtr inverse_;
};

bool trigger_trial(const Mutant& mutant, const TriggerOracle& oracle, InputKind kind, Rng& rng);

}  // namespace qtk
