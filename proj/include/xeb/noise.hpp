#pragma once

// Digital error model by quantum trajectories: each trajectory is the ideal
// circuit with randomly inserted Pauli gates, a random initial basis state
// and a measurement bit-flip mask, simulated as a pure state.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "xeb/circuit.hpp"
#include "xeb/statevector.hpp"

namespace xeb {

struct NoiseModel {
    double r1 = 0.0;      // Pauli rate after each single-qubit gate
    double r2 = 0.0;      // two-qubit Pauli rate after each CZ
    double r_init = 0.0;  // initial bit-flip rate per qubit
    double r_mes = 0.0;   // measurement bit-flip rate per qubit

    /// Throws ConfigError unless every rate lies in [0, 1].
    void validate() const;
    bool noiseless() const noexcept { return r1 == 0 && r2 == 0 && r_init == 0 && r_mes == 0; }

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

std::string to_json(const NoiseModel& noise);
/// Throws ParseError on malformed text or a missing rate.
NoiseModel parse_noise(std::string_view text);

/// One Pauli placed immediately after `cycle` of the base circuit.
struct PauliInsertion {
    std::size_t cycle = 0;
    Qubit qubit = 0;
    GateKind kind = GateKind::Z;  // X, Y or Z

    friend bool operator==(const PauliInsertion&, const PauliInsertion&) = default;
};

struct Trajectory {
    std::vector<PauliInsertion> errors;  // ordered by cycle, then gate order
    std::uint64_t init_mask = 0;         // bit q set: qubit q starts in |1>
    std::uint64_t mes_mask = 0;          // XORed into the measured bitstring

    /// No inserted Paulis and no initial flips: the ideal state applies.
    bool ideal_state() const noexcept { return errors.empty() && init_mask == 0; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Draw order: initial flips per qubit, then per gate in circuit order one
/// Bernoulli draw followed (on error) by the uniform Pauli choice, then the
/// measurement flips per qubit.
Trajectory sample_trajectory(const Circuit& circuit, const NoiseModel& noise, Stream& rng);

/// Trajectory i of a run keyed by `seed`.
Trajectory trajectory_at(const Circuit& circuit, const NoiseModel& noise, std::uint64_t seed,
                         std::uint64_t index);

/// The base circuit with the trajectory's Paulis as extra cycles. Products of
/// several Paulis on one qubit after the same cycle are merged up to phase.
Circuit derived_circuit(const Circuit& circuit, const Trajectory& traj);

/// Ideal states after selected cycles, for resuming trajectories whose first
/// error comes late in the circuit.
class SnapshotCache {
public:
    /// Keeps the state after every `interval`-th cycle (0 picks the interval
    /// from `budget_bytes`).
    SnapshotCache(const Circuit& circuit, std::size_t interval, std::size_t budget_bytes,
                  const SimOptions& opt);

    const StateVector& final_state() const noexcept { return final_; }
    std::size_t interval() const noexcept { return interval_; }

    /// Final state of the trajectory, starting from the latest usable snapshot.
    StateVector run(const Trajectory& traj) const;

private:
    const Circuit& circuit_;
    SimOptions opt_;
    std::size_t interval_;
    std::vector<StateVector> snaps_;  // snaps_[j] is the state after cycle j * interval_
    StateVector final_;
};

StateVector simulate_trajectory(const Circuit& circuit, const Trajectory& traj,
                                const SimOptions& opt = {});

struct NoisySampleOptions {
    /// Bitstrings drawn per trajectory. 1 gives i.i.d. samples; larger values
    /// are faster but shots within a trajectory share its error realization.
    std::size_t shots_per_trajectory = 1;
    std::size_t snapshot_interval = 0;
    std::size_t snapshot_budget_bytes = std::size_t{512} << 20;
    SimOptions sim{};
};

struct NoisySampleResult {
    Sample sample;
    std::uint64_t trajectories = 0;
    std::uint64_t simulated = 0;  // trajectories that needed their own simulation
};

/// Throws ConfigError when m == 0, CapacityError beyond the qubit cap.
NoisySampleResult noisy_sample_run(const Circuit& circuit, const NoiseModel& noise, std::size_t m,
                                   std::uint64_t seed, const NoisySampleOptions& opt = {});

inline Sample noisy_sample(const Circuit& circuit, const NoiseModel& noise, std::size_t m,
                           std::uint64_t seed, const NoisySampleOptions& opt = {}) {
    return noisy_sample_run(circuit, noise, m, seed, opt).sample;
}

/// Mean over trajectories of their measured output distributions.
ProbVector average_noisy_distribution(const Circuit& circuit, const NoiseModel& noise,
                                      std::size_t n_traj, std::uint64_t seed,
                                      const SimOptions& opt = {});

/// Exact output distribution with one Pauli inserted.
ProbVector single_error_distribution(const Circuit& circuit, const ErrorLocation& loc,
                                     const SimOptions& opt = {});

/// Every (cycle, qubit, pauli) with cycle in [first, last] and pauli in `paulis`.
std::vector<ErrorLocation> error_locations(const Circuit& circuit, std::size_t first,
                                           std::size_t last, const std::vector<Pauli>& paulis);

/// Mean of single_error_distribution over `locs`, resuming each from the
/// ideal state at its cycle.
ProbVector average_single_error_distribution(const Circuit& circuit,
                                             const std::vector<ErrorLocation>& locs,
                                             const SimOptions& opt = {});

/// Text samples: header `#n=<n> m=<m> seed=<seed>`, then one bitstring per
/// line with qubit 0 leftmost. Later lines starting with '#' are comments.
void write_samples(std::ostream& out, const Sample& sample, std::uint64_t seed);

struct SampleFile {
    Sample sample;
    std::uint64_t seed = 0;
};
SampleFile read_samples(std::istream& in);

std::string bitstring(std::uint64_t x, unsigned n);
/// Throws ConfigError on characters other than '0'/'1' or a wrong length.
std::uint64_t parse_bitstring(std::string_view s, unsigned n);

}  // namespace xeb
