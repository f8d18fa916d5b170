#include "qtk/simcore/gate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtk {

namespace {

struct GateInfo {
    GateKind kind;
    const char* name;
    int arity;
    bool angle;
};

constexpr GateInfo kGates[] = {
    {GateKind::X, "X", 1, false},         {GateKind::Y, "Y", 1, false},
    {GateKind::Z, "Z", 1, false},         {GateKind::H, "H", 1, false},
    {GateKind::S, "S", 1, false},         {GateKind::Sdg, "Sdg", 1, false},
    {GateKind::T, "T", 1, false},         {GateKind::Tdg, "Tdg", 1, false},
    {GateKind::R1, "R1", 1, true},        {GateKind::Rz, "Rz", 1, true},
    {GateKind::CNOT, "CNOT", 2, false},   {GateKind::SWAP, "SWAP", 2, false},
    {GateKind::Toffoli, "Toffoli", 3, false}, {GateKind::CSWAP, "CSWAP", 3, false},
};

const GateInfo& info(GateKind k) { return kGates[static_cast<int>(k)]; }

}  // namespace

int gate_arity(GateKind kind) { return info(kind).arity; }
bool gate_has_angle(GateKind kind) { return info(kind).angle; }
std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_from_name(std::string_view name) {
    for (const auto& g : kGates)
        if (name == g.name) return g.kind;
    return std::nullopt;
}

const std::vector<GateKind>& all_gate_kinds() {
    static const std::vector<GateKind> kinds = [] {
        std::vector<GateKind> v;
        for (const auto& g : kGates) v.push_back(g.kind);
        return v;
    }();
    return kinds;
}

Gate Gate::inverse() const {
    switch (kind) {
        case GateKind::S: return Gate(GateKind::Sdg);
        case GateKind::Sdg: return Gate(GateKind::S);
        case GateKind::T: return Gate(GateKind::Tdg);
        case GateKind::Tdg: return Gate(GateKind::T);
        case GateKind::R1:
        case GateKind::Rz: return Gate(kind, -theta);
        default: return *this;
    }
}

std::vector<cplx> Gate::matrix() const {
    using std::numbers::sqrt2;
    const cplx i(0, 1);
    const double h = 1.0 / sqrt2;
    switch (kind) {
        case GateKind::X: return {0, 1, 1, 0};
        case GateKind::Y: return {0, -i, i, 0};
        case GateKind::Z: return {1, 0, 0, -1};
        case GateKind::H: return {h, h, h, -h};
        case GateKind::S: return {1, 0, 0, i};
        case GateKind::Sdg: return {1, 0, 0, -i};
        case GateKind::T: return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
        case GateKind::Tdg: return {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)};
        case GateKind::R1: return {1, 0, 0, std::polar(1.0, theta)};
        case GateKind::Rz: return {std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)};
        case GateKind::CNOT:
            return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
        case GateKind::SWAP:
            return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
        case GateKind::Toffoli:
        case GateKind::CSWAP: {
            std::vector<cplx> m(64, 0.0);
            for (int r = 0; r < 8; ++r) m[r * 8 + r] = 1;
            if (kind == GateKind::Toffoli) {
                m[6 * 8 + 6] = m[7 * 8 + 7] = 0;
                m[6 * 8 + 7] = m[7 * 8 + 6] = 1;
            } else {
                m[5 * 8 + 5] = m[6 * 8 + 6] = 0;
                m[5 * 8 + 6] = m[6 * 8 + 5] = 1;
            }
            return m;
        }
    }
    throw std::logic_error("unknown gate kind");
}

std::string Gate::label() const {
    std::string s(gate_name(kind));
    if (gate_has_angle(kind)) s += "(" + std::to_string(theta) + ")";
    return s;
}

}  // namespace qtk
