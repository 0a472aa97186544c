#pragma once

// Random circuit families on a 2D qubit lattice.
//
// Qubits are numbered row-major, q = r * cols + c. Cycle 0 of every generated
// circuit is one Hadamard per qubit; later cycles follow the family rules.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xeb {

using Qubit = std::uint32_t;
inline constexpr Qubit kNoQubit = ~Qubit{0};

enum class GateKind : std::uint8_t {
    H,
    XHalf,  // pi/2 rotation about X
    YHalf,  // pi/2 rotation about Y
    T,
    CZ,
    X,  // Paulis only appear through error insertion
    Y,
    Z,
};

enum class Variant : std::uint8_t {
    Sec4,          // staggered non-adjacent CZ layouts, open boundary
    Dense,         // every qubit in a CZ each CZ cycle, periodic boundary
    StatEnsemble,  // independent random layers for coupling statistics
};

enum class Pauli : std::uint8_t { X, Y, Z };

std::string_view gate_name(GateKind kind) noexcept;
std::optional<GateKind> gate_from_name(std::string_view name) noexcept;
std::string_view variant_name(Variant v) noexcept;
std::optional<Variant> variant_from_name(std::string_view name) noexcept;
GateKind pauli_gate(Pauli p) noexcept;

constexpr bool is_two_qubit(GateKind k) noexcept { return k == GateKind::CZ; }
/// Two nonzero entries per row/column: the gates that can flip a basis path.
constexpr bool is_two_sparse(GateKind k) noexcept {
    return k == GateKind::H || k == GateKind::XHalf || k == GateKind::YHalf;
}
constexpr bool is_pauli(GateKind k) noexcept {
    return k == GateKind::X || k == GateKind::Y || k == GateKind::Z;
}

struct Lattice {
    std::uint32_t rows = 1;
    std::uint32_t cols = 1;
    bool periodic = false;

    std::uint32_t num_qubits() const noexcept { return rows * cols; }
    Qubit index(std::uint32_t r, std::uint32_t c) const noexcept { return r * cols + c; }
    bool adjacent(Qubit a, Qubit b) const noexcept;

    /// Throws ConfigError if the lattice cannot host `variant`.
    void validate(Variant variant) const;

    friend bool operator==(const Lattice&, const Lattice&) = default;
};

struct Gate {
    GateKind kind = GateKind::H;
    Qubit q0 = 0;
    Qubit q1 = kNoQubit;

    static Gate single(GateKind k, Qubit q) noexcept { return {k, q, kNoQubit}; }
    static Gate cz(Qubit a, Qubit b) noexcept { return {GateKind::CZ, a, b}; }

    unsigned arity() const noexcept { return is_two_qubit(kind) ? 2u : 1u; }
    bool touches(Qubit q) const noexcept { return q0 == q || (arity() == 2 && q1 == q); }

    friend bool operator==(const Gate&, const Gate&) = default;
};

using Cycle = std::vector<Gate>;
using CzLayout = std::vector<Gate>;

struct Circuit {
    Lattice lattice;
    std::uint64_t seed = 0;
    Variant variant = Variant::Sec4;
    std::vector<Cycle> cycles;

    std::uint32_t num_qubits() const noexcept { return lattice.num_qubits(); }
    /// Cycles after the initial Hadamard cycle.
    std::size_t depth() const noexcept { return cycles.empty() ? 0 : cycles.size() - 1; }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

struct GeneratorOptions {
    /// CZ probability per lattice edge per layer (StatEnsemble only).
    double p_cz = 0.25;
};

struct GateCensus {
    std::uint64_t g1 = 0;        // single-qubit gates after cycle 0
    std::uint64_t g1_total = 0;  // including the initial Hadamards
    std::uint64_t g2 = 0;
    std::uint64_t t_count = 0;
    std::uint64_t depth = 0;  // cycles after cycle 0
};

struct ErrorLocation {
    std::size_t cycle = 0;  // the Pauli goes immediately after this cycle
    Qubit qubit = 0;
    Pauli pauli = Pauli::Z;
};

/// CZ layouts cycled through by the generator; layout for cycle/layer t >= 1
/// is layouts[(t - 1) % layouts.size()]. Sec4: 8 layouts, Dense: 4.
std::vector<CzLayout> build_cz_layouts(const Lattice& lattice, Variant variant);

/// Pure function of its arguments. `depth` counts cycles for Sec4 and layers
/// (single-qubit cycle + CZ cycle) for Dense and StatEnsemble.
Circuit generate_circuit(const Lattice& lattice, std::size_t depth, std::uint64_t seed,
                         Variant variant, const GeneratorOptions& options = {});

GateCensus count_gates(const Circuit& circuit);

/// Adds one Pauli gate on loc.qubit immediately after cycle loc.cycle. The
/// gate goes into a Pauli-only cycle placed right after that cycle, created
/// if needed. Throws ConfigError on an out-of-range location.
Circuit insert_pauli_error(const Circuit& circuit, const ErrorLocation& loc);

/// Inverse of insert_pauli_error for the same location.
Circuit remove_pauli_error(const Circuit& circuit, const ErrorLocation& loc);

/// Structural checks: qubit ranges, arity, per-cycle disjointness (except the
/// StatEnsemble family), CZ neighbours. Throws ConfigError.
void validate_circuit(const Circuit& circuit);

std::string serialize(const Circuit& circuit);

/// Throws ParseError naming the line or field at fault.
Circuit parse_circuit(std::string_view text);

}  // namespace xeb
