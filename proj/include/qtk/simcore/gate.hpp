#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtk {

using cplx = std::complex<double>;

enum class GateKind { X, Y, Z, H, S, Sdg, T, Tdg, R1, Rz, CNOT, SWAP, Toffoli, CSWAP };

int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);
std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);
const std::vector<GateKind>& all_gate_kinds();

/// A gate kind plus its rotation angle (radians) when the kind takes one.
struct Gate {
    GateKind kind = GateKind::X;
    double theta = 0.0;

    Gate() = default;
    Gate(GateKind k, double t = 0.0) : kind(k), theta(t) {}

    int arity() const { return gate_arity(kind); }
    Gate inverse() const;

    /// Row-major 2^arity x 2^arity unitary. The first target is the most
    /// significant bit of the row/column index.
    std::vector<cplx> matrix() const;

    std::string label() const;

    bool operator==(const Gate& o) const { return kind == o.kind && theta == o.theta; }
};

}  // namespace qtk
