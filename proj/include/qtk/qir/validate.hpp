#pragma once

#include <string>
#include <vector>

#include "qtk/qir/ir.hpp"

namespace qtk {

struct Issue {
    std::string site;
    std::string message;
};

/// Static checks: scoping, expression types, gate arity and angles, callee
/// existence and argument kinds, adjointability of within blocks and
/// adjoint calls. An empty result means the subroutine is well formed.
std::vector<Issue> validate(const Subroutine& sub, const Library& lib);
inline bool is_valid(const Subroutine& sub, const Library& lib) { return validate(sub, lib).empty(); }

}  // namespace qtk
