#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "qtk/qir/ir.hpp"

namespace qtk {

class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonical `qir/1` text: header, signature line, then one JSON record per
/// statement indented two spaces per nesting level. `:else` and `:apply`
/// marker lines separate the second block of if and within statements.
std::string to_text(const Subroutine& sub);
Subroutine from_text(std::string_view text);

/// Several subroutines separated by blank lines.
std::string library_to_text(const Library& lib);
Library library_from_text(std::string_view text);

std::string qubit_ref_str(const QubitRef& r);
QubitRef parse_qubit_ref(std::string_view s);
std::string qarg_str(const QArg& q);
QArg parse_qarg(std::string_view s);

/// Single-line rendering of one statement record (no nested bodies).
std::string stmt_record(const Stmt& s);

}  // namespace qtk
