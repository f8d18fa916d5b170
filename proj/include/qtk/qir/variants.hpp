#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qtk/qir/ir.hpp"

namespace qtk {

/// Raised when a variant cannot be generated (e.g. adjoint of a measuring body).
class VariantError : public std::logic_error {
    using std::logic_error::logic_error;
};

/// True iff the body is measurement-free, has no repeat-until loops, every
/// named callee is adjointable and the classical statements can be hoisted
/// ahead of the reversed quantum statements. Handle calls are assumed
/// adjointable; the interpreter checks the bound subroutine when called.
bool is_adjointable(const Subroutine& sub, const Library& lib);
bool block_adjointable(const Block& block, const Library& lib);

/// Classical statements keep their order and run first; quantum statements
/// are reversed and inverted.
Block inverse_block(const Block& block);

Subroutine inverse_of(const Subroutine& sub, const Library& lib);
/// Prepends a control register parameter (unconstrained length).
Subroutine controlled_of(const Subroutine& sub, const Library& lib);
Subroutine power_of(const Subroutine& sub, int k, const Library& lib);

enum class EndianSide { Both, Input, Output };
/// Reverses the qubit order of `param` around the body.
Subroutine reindex_endian(const Subroutine& sub, const std::string& param, EndianSide side = EndianSide::Both);

/// Replaces each measurement with a fresh classical parameter and drops all
/// quantum statements, keeping the control-flow skeleton.
Subroutine classical_substitute(const Subroutine& sub);

/// Site of the first measurement reachable from `sub` through named calls.
std::optional<std::string> find_measurement(const Subroutine& sub, const Library& lib);

/// Statement path formatting shared by the interpreter and the mutator:
/// "2", "1.body.0", "3.then.1", "4.else.0", "5.within.0", "5.apply.2".
std::string format_path(const std::vector<std::pair<const char*, int>>& path);

}  // namespace qtk
