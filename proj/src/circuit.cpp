#include "xeb/circuit.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "xeb/error.hpp"
#include "xeb/rng.hpp"

namespace xeb {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 8> kGateNames{{
    {GateKind::H, "h"},
    {GateKind::XHalf, "x2"},
    {GateKind::YHalf, "y2"},
    {GateKind::T, "t"},
    {GateKind::CZ, "cz"},
    {GateKind::X, "x"},
    {GateKind::Y, "y"},
    {GateKind::Z, "z"},
}};

constexpr std::array<std::pair<Variant, std::string_view>, 3> kVariantNames{{
    {Variant::Sec4, "sec4"},
    {Variant::Dense, "dense"},
    {Variant::StatEnsemble, "stat"},
}};

}  // namespace

std::string_view gate_name(GateKind kind) noexcept {
    for (auto [k, name] : kGateNames)
        if (k == kind) return name;
    return "?";
}

std::optional<GateKind> gate_from_name(std::string_view name) noexcept {
    for (auto [k, n] : kGateNames)
        if (n == name) return k;
    return std::nullopt;
}

std::string_view variant_name(Variant v) noexcept {
    for (auto [k, name] : kVariantNames)
        if (k == v) return name;
    return "?";
}

std::optional<Variant> variant_from_name(std::string_view name) noexcept {
    for (auto [k, n] : kVariantNames)
        if (n == name) return k;
    return std::nullopt;
}

GateKind pauli_gate(Pauli p) noexcept {
    switch (p) {
        case Pauli::X: return GateKind::X;
        case Pauli::Y: return GateKind::Y;
        case Pauli::Z: break;
    }
    return GateKind::Z;
}

bool Lattice::adjacent(Qubit a, Qubit b) const noexcept {
    const std::uint32_t n = num_qubits();
    if (a >= n || b >= n || a == b) return false;
    const std::uint32_t ra = a / cols, ca = a % cols;
    const std::uint32_t rb = b / cols, cb = b % cols;
    auto ring_step = [this](std::uint32_t x, std::uint32_t y, std::uint32_t size) {
        const std::uint32_t diff = x > y ? x - y : y - x;
        return diff == 1 || (periodic && size > 2 && diff == size - 1);
    };
    if (ra == rb) return ring_step(ca, cb, cols);
    if (ca == cb) return ring_step(ra, rb, rows);
    return false;
}

void Lattice::validate(Variant variant) const {
    if (rows == 0 || cols == 0) throw ConfigError("lattice dimensions must be positive");
    if (variant == Variant::Dense) {
        if (!periodic) throw ConfigError("dense variant requires a periodic lattice");
        if (rows % 2 != 0 || cols % 2 != 0)
            throw ConfigError("dense variant requires even lattice dimensions, got " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    } else if (variant == Variant::Sec4 && periodic) {
        throw ConfigError("sec4 variant uses open boundaries");
    }
    if (periodic && (rows % 2 != 0 || cols % 2 != 0))
        throw ConfigError("periodic lattices require even dimensions");
}

std::vector<CzLayout> build_cz_layouts(const Lattice& lattice, Variant variant) {
    lattice.validate(variant);
    const std::uint32_t R = lattice.rows, C = lattice.cols;

    if (variant == Variant::Dense) {
        auto horizontal = [&](std::uint32_t offset) {
            CzLayout layout;
            for (std::uint32_t r = 0; r < R; ++r)
                for (std::uint32_t c = offset; c < C; c += 2)
                    layout.push_back(Gate::cz(lattice.index(r, c), lattice.index(r, (c + 1) % C)));
            return layout;
        };
        auto vertical = [&](std::uint32_t offset) {
            CzLayout layout;
            for (std::uint32_t r = offset; r < R; r += 2)
                for (std::uint32_t c = 0; c < C; ++c)
                    layout.push_back(Gate::cz(lattice.index(r, c), lattice.index((r + 1) % R, c)));
            return layout;
        };
        return {horizontal(0), vertical(0), horizontal(1), vertical(1)};
    }

    // Staggered pattern: horizontal edge (r,c)-(r,c+1) belongs to layout
    // (c + 2r) mod 4, vertical edge (r,c)-(r+1,c) to layout (r + 2c) mod 4.
    auto horizontal = [&](std::uint32_t a) {
        CzLayout layout;
        for (std::uint32_t r = 0; r < R; ++r)
            for (std::uint32_t c = 0; c + 1 < C; ++c)
                if ((c + 2 * r) % 4 == a)
                    layout.push_back(Gate::cz(lattice.index(r, c), lattice.index(r, c + 1)));
        return layout;
    };
    auto vertical = [&](std::uint32_t b) {
        CzLayout layout;
        for (std::uint32_t r = 0; r + 1 < R; ++r)
            for (std::uint32_t c = 0; c < C; ++c)
                if ((r + 2 * c) % 4 == b)
                    layout.push_back(Gate::cz(lattice.index(r, c), lattice.index(r + 1, c)));
        return layout;
    };
    return {horizontal(0), horizontal(2), vertical(0), vertical(2),
            horizontal(1), horizontal(3), vertical(1), vertical(3)};
}

namespace {

Cycle hadamard_cycle(std::uint32_t n) {
    Cycle cycle;
    cycle.reserve(n);
    for (Qubit q = 0; q < n; ++q) cycle.push_back(Gate::single(GateKind::H, q));
    return cycle;
}

constexpr std::array<GateKind, 3> kSingleChoices{GateKind::XHalf, GateKind::YHalf, GateKind::T};

// Placement rules shared by Sec4 and Dense: a gate only on qubits that were
// in a CZ in the previous cycle, the first one is T, and afterwards never a
// repeat of the qubit's most recent single-qubit gate.
class SingleQubitPlacer {
public:
    explicit SingleQubitPlacer(std::uint32_t n) : last_(n, std::nullopt) {}

    GateKind choose(Qubit q, Stream& rng) {
        GateKind kind;
        if (!last_[q]) {
            kind = GateKind::T;
        } else {
            std::array<GateKind, 2> allowed{};
            std::size_t m = 0;
            for (GateKind k : kSingleChoices)
                if (k != *last_[q]) allowed[m++] = k;
            kind = allowed[rng.below(m)];
        }
        last_[q] = kind;
        return kind;
    }

private:
    std::vector<std::optional<GateKind>> last_;
};

std::vector<bool> occupancy(const Cycle& cycle, std::uint32_t n) {
    std::vector<bool> busy(n, false);
    for (const Gate& g : cycle) {
        busy[g.q0] = true;
        if (g.arity() == 2) busy[g.q1] = true;
    }
    return busy;
}

Circuit generate_sec4(const Lattice& lattice, std::size_t depth, std::uint64_t seed) {
    const std::uint32_t n = lattice.num_qubits();
    const auto layouts = build_cz_layouts(lattice, Variant::Sec4);
    Stream rng(seed, "circuit");
    SingleQubitPlacer placer(n);

    Circuit circuit{lattice, seed, Variant::Sec4, {}};
    circuit.cycles.reserve(depth + 1);
    circuit.cycles.push_back(hadamard_cycle(n));
    std::vector<bool> prev_cz(n, false);
    for (std::size_t t = 1; t <= depth; ++t) {
        Cycle cycle = layouts[(t - 1) % layouts.size()];
        const auto in_cz = occupancy(cycle, n);
        for (Qubit q = 0; q < n; ++q)
            if (!in_cz[q] && prev_cz[q]) cycle.push_back(Gate::single(placer.choose(q, rng), q));
        prev_cz = in_cz;
        circuit.cycles.push_back(std::move(cycle));
    }
    return circuit;
}

Circuit generate_dense(const Lattice& lattice, std::size_t layers, std::uint64_t seed) {
    const std::uint32_t n = lattice.num_qubits();
    const auto layouts = build_cz_layouts(lattice, Variant::Dense);
    Stream rng(seed, "circuit");
    SingleQubitPlacer placer(n);

    Circuit circuit{lattice, seed, Variant::Dense, {}};
    circuit.cycles.reserve(2 * layers + 1);
    circuit.cycles.push_back(hadamard_cycle(n));
    std::vector<bool> prev_cz(n, false);
    for (std::size_t t = 1; t <= layers; ++t) {
        Cycle singles;
        for (Qubit q = 0; q < n; ++q)
            if (prev_cz[q]) singles.push_back(Gate::single(placer.choose(q, rng), q));
        circuit.cycles.push_back(std::move(singles));
        Cycle cz = layouts[(t - 1) % layouts.size()];
        prev_cz = occupancy(cz, n);
        circuit.cycles.push_back(std::move(cz));
    }
    return circuit;
}

Circuit generate_stat(const Lattice& lattice, std::size_t layers, std::uint64_t seed,
                      double p_cz) {
    if (!(p_cz >= 0.0 && p_cz <= 1.0)) throw ConfigError("p_cz must lie in [0, 1]");
    const std::uint32_t n = lattice.num_qubits();
    Stream rng(seed, "circuit");

    std::vector<std::pair<Qubit, Qubit>> edges;
    for (std::uint32_t r = 0; r < lattice.rows; ++r)
        for (std::uint32_t c = 0; c < lattice.cols; ++c) {
            if (c + 1 < lattice.cols || (lattice.periodic && lattice.cols > 2))
                edges.emplace_back(lattice.index(r, c), lattice.index(r, (c + 1) % lattice.cols));
            if (r + 1 < lattice.rows || (lattice.periodic && lattice.rows > 2))
                edges.emplace_back(lattice.index(r, c), lattice.index((r + 1) % lattice.rows, c));
        }

    Circuit circuit{lattice, seed, Variant::StatEnsemble, {}};
    circuit.cycles.reserve(2 * layers + 1);
    circuit.cycles.push_back(hadamard_cycle(n));
    for (std::size_t t = 1; t <= layers; ++t) {
        Cycle singles;
        singles.reserve(n);
        for (Qubit q = 0; q < n; ++q)
            singles.push_back(Gate::single(kSingleChoices[rng.below(3)], q));
        circuit.cycles.push_back(std::move(singles));
        Cycle cz;
        for (auto [a, b] : edges)
            if (rng.bernoulli(p_cz)) cz.push_back(Gate::cz(a, b));
        circuit.cycles.push_back(std::move(cz));
    }
    return circuit;
}

}  // namespace

Circuit generate_circuit(const Lattice& lattice, std::size_t depth, std::uint64_t seed,
                         Variant variant, const GeneratorOptions& options) {
    lattice.validate(variant);
    switch (variant) {
        case Variant::Sec4: return generate_sec4(lattice, depth, seed);
        case Variant::Dense: return generate_dense(lattice, depth, seed);
        case Variant::StatEnsemble: return generate_stat(lattice, depth, seed, options.p_cz);
    }
    throw ConfigError("unknown circuit variant");
}

GateCensus count_gates(const Circuit& circuit) {
    GateCensus census;
    census.depth = circuit.depth();
    for (std::size_t t = 0; t < circuit.cycles.size(); ++t) {
        for (const Gate& g : circuit.cycles[t]) {
            if (g.arity() == 2) {
                ++census.g2;
                continue;
            }
            ++census.g1_total;
            if (t > 0) ++census.g1;
            if (g.kind == GateKind::T) ++census.t_count;
        }
    }
    return census;
}

namespace {

bool pauli_only(const Cycle& cycle) {
    return !cycle.empty() &&
           std::all_of(cycle.begin(), cycle.end(), [](const Gate& g) { return is_pauli(g.kind); });
}

void check_location(const Circuit& circuit, const ErrorLocation& loc) {
    if (loc.cycle >= circuit.cycles.size())
        throw ConfigError("error location cycle " + std::to_string(loc.cycle) +
                          " outside circuit with " + std::to_string(circuit.cycles.size()) +
                          " cycles");
    if (loc.qubit >= circuit.num_qubits())
        throw ConfigError("error location qubit " + std::to_string(loc.qubit) + " outside lattice");
}

}  // namespace

Circuit insert_pauli_error(const Circuit& circuit, const ErrorLocation& loc) {
    check_location(circuit, loc);
    Circuit out = circuit;
    const Gate pauli = Gate::single(pauli_gate(loc.pauli), loc.qubit);
    const std::size_t next = loc.cycle + 1;
    if (next < out.cycles.size() && pauli_only(out.cycles[next])) {
        Cycle& c = out.cycles[next];
        const bool busy =
            std::any_of(c.begin(), c.end(), [&](const Gate& g) { return g.touches(loc.qubit); });
        if (!busy) {
            c.push_back(pauli);
            return out;
        }
    }
    out.cycles.insert(out.cycles.begin() + static_cast<std::ptrdiff_t>(next), Cycle{pauli});
    return out;
}

Circuit remove_pauli_error(const Circuit& circuit, const ErrorLocation& loc) {
    check_location(circuit, loc);
    const std::size_t next = loc.cycle + 1;
    const Gate pauli = Gate::single(pauli_gate(loc.pauli), loc.qubit);
    if (next >= circuit.cycles.size() || !pauli_only(circuit.cycles[next]))
        throw ConfigError("no inserted Pauli after cycle " + std::to_string(loc.cycle));
    Circuit out = circuit;
    Cycle& c = out.cycles[next];
    auto it = std::find(c.begin(), c.end(), pauli);
    if (it == c.end())
        throw ConfigError("no inserted " + std::string(gate_name(pauli.kind)) + " on qubit " +
                          std::to_string(loc.qubit) + " after cycle " + std::to_string(loc.cycle));
    c.erase(it);
    if (c.empty()) out.cycles.erase(out.cycles.begin() + static_cast<std::ptrdiff_t>(next));
    return out;
}

void validate_circuit(const Circuit& circuit) {
    circuit.lattice.validate(circuit.variant);
    const std::uint32_t n = circuit.num_qubits();
    const bool allow_overlap = circuit.variant == Variant::StatEnsemble;
    for (std::size_t t = 0; t < circuit.cycles.size(); ++t) {
        std::vector<bool> used(n, false);
        auto where = [&] { return "cycle " + std::to_string(t) + ": "; };
        for (const Gate& g : circuit.cycles[t]) {
            if (g.q0 >= n) throw ConfigError(where() + "qubit " + std::to_string(g.q0) + " out of range");
            if (g.arity() == 2) {
                if (g.q1 >= n)
                    throw ConfigError(where() + "qubit " + std::to_string(g.q1) + " out of range");
                if (g.q0 == g.q1) throw ConfigError(where() + "cz on a single qubit");
                if (!circuit.lattice.adjacent(g.q0, g.q1))
                    throw ConfigError(where() + "cz between non-neighbouring qubits " +
                                      std::to_string(g.q0) + "," + std::to_string(g.q1));
            } else if (g.q1 != kNoQubit) {
                throw ConfigError(where() + "single-qubit gate with two qubits");
            }
            for (Qubit q : {g.q0, g.q1}) {
                if (q == kNoQubit) continue;
                if (used[q] && !allow_overlap)
                    throw ConfigError(where() + "qubit " + std::to_string(q) +
                                      " used by two gates in one cycle");
                used[q] = true;
            }
        }
    }
}

}  // namespace xeb
