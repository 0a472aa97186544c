#pragma once

// Full-amplitude state-vector simulation.
//
// Amplitude index bit q holds qubit q (little-endian), so a single-qubit gate
// on q pairs amplitudes 2^q apart.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xeb/circuit.hpp"
#include "xeb/kernels.hpp"
#include "xeb/rng.hpp"

namespace xeb {

inline constexpr unsigned kDefaultQubitCap = 28;

class StateVector {
public:
    /// |0...0> on n qubits. Throws CapacityError when n is 0 or above `cap`.
    explicit StateVector(unsigned n, unsigned cap = kDefaultQubitCap);

    /// Computational basis state |index>.
    static StateVector basis(unsigned n, std::uint64_t index, unsigned cap = kDefaultQubitCap);

    unsigned num_qubits() const noexcept { return n_; }
    std::uint64_t size() const noexcept { return amps_.size(); }

    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::span<cplx> amplitudes() noexcept { return amps_; }

    /// Throws ConfigError when x is out of range.
    cplx amplitude(std::uint64_t x) const;

    double norm_squared() const;

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    StateVector(unsigned n, std::vector<cplx> amps) : n_(n), amps_(std::move(amps)) {}
    friend StateVector load_state(std::istream& in, unsigned cap);

    unsigned n_;
    std::vector<cplx> amps_;
};

inline StateVector init_state(unsigned n, unsigned cap = kDefaultQubitCap) {
    return StateVector(n, cap);
}

/// Fixed gate matrices (X/Y/Z are the standard Paulis).
Mat2 gate_matrix(GateKind kind);

enum class KernelMode : std::uint8_t {
    Specialized,  // diagonal, real and CZ gates use their own kernels
    Generic,      // every single-qubit gate goes through the complex 2x2 kernel
};

struct SimOptions {
    KernelMode mode = KernelMode::Specialized;
    /// Run consecutive gates confined to the lowest `block_qubits` qubits
    /// block by block, so each 2^block_qubits slice stays in cache.
    bool fuse = true;
    unsigned block_qubits = 5;
    /// Kernel table override; nullptr uses active_kernels().
    const KernelTable* kernels = nullptr;
};

void apply_matrix(StateVector& state, const Mat2& m, unsigned q, const SimOptions& opt = {});
void apply_single_qubit(StateVector& state, GateKind kind, unsigned q, const SimOptions& opt = {});
void apply_cz(StateVector& state, unsigned q1, unsigned q2, const SimOptions& opt = {});
void apply_gate(StateVector& state, const Gate& gate, const SimOptions& opt = {});

/// Called after each applied cycle with the cycle index and a read-only state.
using CycleObserver = std::function<void(std::size_t cycle, const StateVector& state)>;

/// Applies every cycle in order. Throws ConfigError on a qubit-count mismatch.
void apply_circuit(StateVector& state, const Circuit& circuit, const CycleObserver& observer = {},
                   const SimOptions& opt = {});

/// Applies `cycles` in order; the observer sees indices starting at
/// `first_index`. Used to resume from a mid-circuit snapshot.
void apply_cycles(StateVector& state, std::span<const Cycle> cycles, std::size_t first_index = 0,
                  const CycleObserver& observer = {}, const SimOptions& opt = {});

/// |0> evolved through the whole circuit.
StateVector simulate(const Circuit& circuit, const SimOptions& opt = {},
                     unsigned cap = kDefaultQubitCap);

struct ProbVector {
    unsigned n = 0;
    std::vector<double> p;

    std::uint64_t size() const noexcept { return p.size(); }
};

ProbVector probabilities(const StateVector& state);

struct Sample {
    unsigned n = 0;
    std::vector<std::uint64_t> bitstrings;
};

/// Inverse-CDF sampler over a fixed distribution; the table is built once.
class Sampler {
public:
    explicit Sampler(const ProbVector& probs);
    explicit Sampler(const StateVector& state);

    std::uint64_t draw(Stream& rng) const;
    /// Throws ConfigError when m == 0.
    Sample draw(std::size_t m, Stream& rng) const;

    unsigned num_qubits() const noexcept { return n_; }

private:
    void build(std::span<const double> weights);

    unsigned n_ = 0;
    std::vector<double> cdf_;
};

Sample sample(const ProbVector& probs, std::size_t m, Stream& rng);
Sample sample(const StateVector& state, std::size_t m, Stream& rng);

/// Binary dump: 16-byte header {"XEBSV1\0\0", u32 n, u32 reserved} followed by
/// 2^n little-endian (re, im) double pairs.
void dump_state(const StateVector& state, std::ostream& out);
StateVector load_state(std::istream& in, unsigned cap = kDefaultQubitCap);

}  // namespace xeb
