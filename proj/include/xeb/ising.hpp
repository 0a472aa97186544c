#pragma once

// Circuits as Ising models at imaginary temperature.
//
// A computational-basis path only changes at two-sparse gates (H, X/2, Y/2),
// so each qubit carries one binary variable per two-sparse gate: the state
// right after that gate. The last variable of every qubit is pinned to the
// output bit; the others are free spins. Every gate contributes a phase that
// is an integer multiple of pi/4 and at most quadratic in the variables, so
//
//   <x|psi> = 2^(-g_sparse/2) sum_b exp(i pi/4 * units(b))
//
// with units(b) = constant + sum_v f_v b_v + sum_{u<v} w_uv b_u b_v over the
// free bits b_v in {0, 1} (b = 1 is |1>, i.e. spin s = -1).

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "xeb/circuit.hpp"
#include "xeb/rng.hpp"

namespace xeb {

inline constexpr unsigned kPhaseSectors = 8;
/// Largest n_free accepted by path_sum_amplitude.
inline constexpr unsigned kPathSumCap = 24;

struct Worldline {
    Qubit qubit = 0;
    std::vector<std::size_t> vertex_cycles;  // cycle of each two-sparse gate
    std::uint32_t d = 0;                     // free spins: vertex_cycles.size() - 1
    std::uint32_t first_vertex = 0;          // index of its k = 0 spin in the model
};

struct IsingVertex {
    Qubit qubit = 0;
    std::uint32_t k = 0;
    std::size_t cycle = 0;
};

struct IsingCoupling {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::int64_t units = 0;
};

struct IsingField {
    std::uint32_t v = 0;
    std::int64_t units = 0;
};

struct BoundaryCoupling {
    std::uint32_t v = 0;
    Qubit qubit = 0;  // output bit x_qubit
    std::int64_t units = 0;
};

/// One gate's phase rule. Operands index free spins; kFixed0 / kFixed1 are
/// constants and values >= kBoundary refer to output bit (value - kBoundary).
struct PhaseTerm {
    static constexpr std::uint32_t kFixed0 = 0xffffffffu;
    static constexpr std::uint32_t kFixed1 = 0xfffffffeu;
    static constexpr std::uint32_t kBoundary = 0x80000000u;

    GateKind kind = GateKind::T;
    std::uint32_t a = kFixed0;  // input spin (two-sparse) or first operand
    std::uint32_t b = kFixed0;  // output spin (two-sparse) or CZ partner
};

struct IsingModel {
    unsigned n = 0;
    std::uint64_t x = 0;
    std::vector<Worldline> worldlines;
    std::vector<IsingVertex> vertices;  // free spins
    std::uint32_t n_free = 0;
    std::uint32_t g_sparse = 0;
    std::vector<PhaseTerm> script;
    /// Quadratic form for this x. Couplings and fields are the exact
    /// integer finite differences, listed when nonzero.
    std::int64_t constant = 0;
    std::vector<IsingField> fields;
    std::vector<IsingCoupling> couplings;  // a < b
    std::vector<BoundaryCoupling> boundary_couplings;
    /// A qubit without two-sparse gates stays |0>; a 1 in x there makes every
    /// path vanish.
    bool vanishes = false;
};

/// Throws ConfigError on gate kinds other than H, X/2, Y/2, T, CZ or a bad x.
IsingModel map_to_ising(const Circuit& circuit, std::uint64_t x);

/// units mod 8 from the gate script (reference evaluation).
unsigned script_units(const IsingModel& model, const std::vector<std::uint8_t>& bits);
/// units mod 8 from the quadratic form.
unsigned phase_units(const IsingModel& model, const std::vector<std::uint8_t>& bits);

/// Exact sector populations M_k over all 2^n_free assignments. Sectors
/// count units - constant, the path-dependent part of the phase.
/// Throws CapacityError above kPathSumCap.
std::array<std::uint64_t, kPhaseSectors> sector_counts(const IsingModel& model);

/// Exact amplitude <x|psi>, including the path-independent phase.
std::complex<double> path_sum_amplitude(const IsingModel& model);

struct PhaseHistogram {
    std::array<std::uint64_t, kPhaseSectors> counts{};
    std::uint64_t q = 0;
    unsigned n = 0;
    std::uint32_t g_sparse = 0;
    std::uint64_t x = 0;
};

/// Q uniform spin assignments scored into phase sectors (as in
/// sector_counts). Sub-streams per
/// range are seeded from `rng`, so the result does not depend on the thread
/// count. With `exhaustive`, Q is ignored and every assignment counted once.
PhaseHistogram phase_histogram(const IsingModel& model, std::uint64_t q, Stream& rng,
                               bool exhaustive = false);

/// Empirical rho_j = Q_j/Q - 1/8 with its first Fourier mode projected out.
std::array<double, kPhaseSectors> rho_bar(const PhaseHistogram& hist);

/// alpha = (1/(N L)) sum Q_j1 Q_j2 cos(2 pi (j1-j2)/8) / ((8 rho_j1 + 1)(8 rho_j2 + 1))
/// with N = 2^n and L = 2^g_sparse.
double bayesian_alpha(const PhaseHistogram& hist, const std::array<double, kPhaseSectors>& rho);
inline double bayesian_alpha(const PhaseHistogram& hist) {
    return bayesian_alpha(hist, rho_bar(hist));
}

/// Adjacency lists over free spins, edges where the coupling is nonzero mod 8.
std::vector<std::vector<std::uint32_t>> interaction_graph(const IsingModel& model);

/// Width of a greedy min-fill elimination ordering (ties by degree, then
/// index). Upper-bounds the treewidth.
unsigned min_fill_width(std::vector<std::vector<std::uint32_t>> adjacency);
inline unsigned treewidth_upper_bound(const IsingModel& model) {
    return min_fill_width(interaction_graph(model));
}

/// One stretch of layers over which a pair of neighbouring worldlines keeps
/// vertices (i, k) and (j, l), with the number of CZs between them.
struct LateralSegment {
    Qubit i = 0, j = 0;
    std::uint32_t k = 0, l = 0;
    std::size_t first_cycle = 0, end_cycle = 0;  // [first, end)
    std::uint32_t cz = 0;
    bool interior = false;  // starts after cycle 0 and is closed by a two-sparse gate
};

std::vector<LateralSegment> lateral_segments(const Circuit& circuit);

struct CouplingStatistics {
    double p_cz = 0.0;
    std::size_t n_models = 0;
    /// Segments starting after the Hadamard cycle and at least 10 layers
    /// before the end, binned by CZ count r.
    std::vector<std::uint64_t> counts;
    std::uint64_t segments = 0;
    /// lk[k][l]: for vertex k on one worldline, l vertices of a neighbour by
    /// the same layer (initial Hadamards not counted).
    std::vector<std::vector<std::uint64_t>> lk;

    double empirical(std::size_t r) const;
    double sigma(std::size_t r) const;  // multinomial standard error
    double mean_k_minus_l(unsigned k) const;
    double var_k_minus_l(unsigned k) const;
    double mean_l(unsigned k) const;
};

/// P(0) = (1 - p)/(1 + p/8), P(r > 0) = 9/(1 + p/8) (p/8/(1 + p/8))^r.
double coupling_probability(std::size_t r, double p_cz);
/// Gaussian approximation sqrt(3/(2 pi (k+l))) exp(-3 (k-l)^2 / (2 (k+l))).
double lk_gaussian(unsigned l, unsigned k);

CouplingStatistics coupling_statistics(const Lattice& lattice, std::size_t depth, double p_cz,
                                       std::size_t n_models, std::uint64_t seed,
                                       unsigned k_max = 40);

std::string ising_to_json(const IsingModel& model);

}  // namespace xeb
