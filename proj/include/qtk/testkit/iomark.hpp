#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qtk {

class IOMarkError : public std::invalid_argument {
public:
    IOMarkError(const std::string& msg, std::size_t pos)
        : std::invalid_argument(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

enum class Endian { BE, LE };

/// Plain-text rendering: `q:` marks a quantum variable, `sub:` a subroutine
/// parameter, a trailing `'` an output and `^BE` / `^LE` the endian mode.
struct MarkedVar {
    std::string name;  // without the output prime
    bool is_quantum = false;
    bool is_subroutine = false;
    std::optional<Endian> endian;
    bool operator==(const MarkedVar&) const = default;
};

struct IOMark {
    std::string program;
    std::vector<MarkedVar> inputs;
    std::vector<MarkedVar> outputs;

    /// `Name : (a, q:b, sub:q:G) -> (q:b'^BE, r')`
    static IOMark parse(std::string_view text);
    std::string str() const;

    const MarkedVar* input(const std::string& name) const;
    const MarkedVar* output(const std::string& name) const;
    /// An output whose name matches an input.
    bool is_in_out(const std::string& name) const;
    bool operator==(const IOMark&) const = default;
};

IOMark parse_io_mark(std::string_view text);
std::string format_io_mark(const IOMark& mark);

enum class IOType { Classical, GenerateQuantum, DetectQuantum, Transform };
std::string_view io_type_name(IOType t);

/// Quantum subroutine parameters (state generators) count as quantum inputs.
IOType classify_io_type(const IOMark& mark);

}  // namespace qtk
