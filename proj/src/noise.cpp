#include "xeb/noise.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "xeb/error.hpp"

namespace xeb {

void NoiseModel::validate() const {
    const std::array<std::pair<const char*, double>, 4> rates{
        {{"r1", r1}, {"r2", r2}, {"r_init", r_init}, {"r_mes", r_mes}}};
    for (auto [name, r] : rates)
        if (!(r >= 0.0 && r <= 1.0))
            throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(r));
}

std::string to_json(const NoiseModel& noise) {
    nlohmann::ordered_json j;
    j["r1"] = noise.r1;
    j["r2"] = noise.r2;
    j["r_init"] = noise.r_init;
    j["r_mes"] = noise.r_mes;
    return j.dump();
}

NoiseModel parse_noise(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + at, '\n');
        throw ParseError(e.what(), static_cast<std::size_t>(line), "");
    }
    if (!j.is_object()) throw ParseError("noise model must be an object", 1, "");
    NoiseModel m;
    for (auto [key, dst] : {std::pair{"r1", &m.r1}, std::pair{"r2", &m.r2},
                            std::pair{"r_init", &m.r_init}, std::pair{"r_mes", &m.r_mes}}) {
        if (!j.contains(key)) throw ParseError("missing rate", 0, key);
        if (!j[key].is_number()) throw ParseError("rate must be a number", 0, key);
        *dst = j[key].get<double>();
    }
    try {
        m.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), 0, "");
    }
    return m;
}

namespace {

constexpr std::array<GateKind, 3> kPaulis{GateKind::X, GateKind::Y, GateKind::Z};

std::uint64_t draw_mask(Stream& rng, double r, std::uint32_t n) {
    std::uint64_t mask = 0;
    for (std::uint32_t q = 0; q < n; ++q)
        if (rng.bernoulli(r)) mask |= std::uint64_t{1} << q;
    return mask;
}

// Pauli as (x, z) bits; products compose by XOR up to a global phase.
unsigned pauli_bits(GateKind k) {
    switch (k) {
        case GateKind::X: return 1;
        case GateKind::Z: return 2;
        default: return 3;
    }
}

GateKind pauli_from_bits(unsigned b) {
    return b == 1 ? GateKind::X : b == 2 ? GateKind::Z : GateKind::Y;
}

// Merged Pauli cycles keyed by the cycle they follow.
std::map<std::size_t, Cycle> pauli_cycles(const Trajectory& traj) {
    std::map<std::size_t, std::map<Qubit, unsigned>> bits;
    for (const auto& e : traj.errors) bits[e.cycle][e.qubit] ^= pauli_bits(e.kind);
    std::map<std::size_t, Cycle> out;
    for (const auto& [t, per_qubit] : bits) {
        Cycle c;
        for (auto [q, b] : per_qubit)
            if (b != 0) c.push_back(Gate::single(pauli_from_bits(b), q));
        if (!c.empty()) out.emplace(t, std::move(c));
    }
    return out;
}

// Cycles from..end of the base circuit with the Pauli cycles interleaved,
// starting with the Paulis that follow cycle from - 1.
std::vector<Cycle> cycles_with_errors(const Circuit& circuit,
                                      const std::map<std::size_t, Cycle>& paulis,
                                      std::size_t from) {
    std::vector<Cycle> out;
    out.reserve(circuit.cycles.size() - from + paulis.size());
    if (from > 0)
        if (auto it = paulis.find(from - 1); it != paulis.end()) out.push_back(it->second);
    for (std::size_t t = from; t < circuit.cycles.size(); ++t) {
        out.push_back(circuit.cycles[t]);
        if (auto it = paulis.find(t); it != paulis.end()) out.push_back(it->second);
    }
    return out;
}

void check_capacity(const Circuit& circuit) {
    if (circuit.num_qubits() > 63) throw CapacityError("bitstrings are limited to 63 qubits");
}

}  // namespace

Trajectory sample_trajectory(const Circuit& circuit, const NoiseModel& noise, Stream& rng) {
    noise.validate();
    const std::uint32_t n = circuit.num_qubits();
    Trajectory traj;
    traj.init_mask = draw_mask(rng, noise.r_init, n);
    for (std::size_t t = 0; t < circuit.cycles.size(); ++t) {
        for (const Gate& g : circuit.cycles[t]) {
            if (g.arity() == 1) {
                if (rng.bernoulli(noise.r1))
                    traj.errors.push_back({t, g.q0, kPaulis[rng.below(3)]});
            } else if (rng.bernoulli(noise.r2)) {
                // 15 non-identity pairs over {I, X, Y, Z} x {I, X, Y, Z}.
                const unsigned idx = static_cast<unsigned>(rng.below(15)) + 1;
                const unsigned a = idx / 4, b = idx % 4;
                if (a != 0) traj.errors.push_back({t, g.q0, kPaulis[a - 1]});
                if (b != 0) traj.errors.push_back({t, g.q1, kPaulis[b - 1]});
            }
        }
    }
    traj.mes_mask = draw_mask(rng, noise.r_mes, n);
    return traj;
}

Trajectory trajectory_at(const Circuit& circuit, const NoiseModel& noise, std::uint64_t seed,
                         std::uint64_t index) {
    Stream rng(seed, "traj", index);
    return sample_trajectory(circuit, noise, rng);
}

Circuit derived_circuit(const Circuit& circuit, const Trajectory& traj) {
    Circuit out{circuit.lattice, circuit.seed, circuit.variant, {}};
    out.cycles = cycles_with_errors(circuit, pauli_cycles(traj), 0);
    return out;
}

StateVector simulate_trajectory(const Circuit& circuit, const Trajectory& traj,
                                const SimOptions& opt) {
    check_capacity(circuit);
    auto state = StateVector::basis(circuit.num_qubits(), traj.init_mask);
    const auto cycles = cycles_with_errors(circuit, pauli_cycles(traj), 0);
    apply_cycles(state, cycles, 0, {}, opt);
    return state;
}

namespace {

std::size_t pick_interval(const Circuit& circuit, std::size_t interval, std::size_t budget) {
    if (interval > 0) return interval;
    const std::size_t bytes = (std::size_t{1} << circuit.num_qubits()) * sizeof(cplx);
    const std::size_t cycles = std::max<std::size_t>(1, circuit.cycles.size());
    const std::size_t fit = std::max<std::size_t>(1, budget / bytes);
    return std::max<std::size_t>(1, (cycles + fit - 1) / fit);
}

}  // namespace

SnapshotCache::SnapshotCache(const Circuit& circuit, std::size_t interval,
                             std::size_t budget_bytes, const SimOptions& opt)
    : circuit_(circuit),
      opt_(opt),
      interval_(pick_interval(circuit, interval, budget_bytes)),
      final_(circuit.num_qubits()) {
    check_capacity(circuit);
    StateVector s(circuit.num_qubits());
    for (std::size_t t = 0; t < circuit.cycles.size(); ++t) {
        apply_cycles(s, std::span(circuit.cycles).subspan(t, 1), t, {}, opt_);
        if (t % interval_ == 0) snaps_.push_back(s);
    }
    final_ = std::move(s);
}

StateVector SnapshotCache::run(const Trajectory& traj) const {
    if (traj.ideal_state()) return final_;
    const auto paulis = pauli_cycles(traj);
    if (traj.init_mask != 0 || paulis.empty()) {
        if (traj.init_mask == 0) return final_;
        auto s = StateVector::basis(circuit_.num_qubits(), traj.init_mask);
        apply_cycles(s, cycles_with_errors(circuit_, paulis, 0), 0, {}, opt_);
        return s;
    }
    const std::size_t first = paulis.begin()->first;
    const std::size_t j = first / interval_;
    StateVector s = snaps_[j];
    apply_cycles(s, cycles_with_errors(circuit_, paulis, j * interval_ + 1), 0, {}, opt_);
    return s;
}

NoisySampleResult noisy_sample_run(const Circuit& circuit, const NoiseModel& noise, std::size_t m,
                                   std::uint64_t seed, const NoisySampleOptions& opt) {
    noise.validate();
    if (m == 0) throw ConfigError("sample size must be at least 1");
    if (opt.shots_per_trajectory == 0) throw ConfigError("shots per trajectory must be >= 1");
    const std::uint32_t n = circuit.num_qubits();

    const SnapshotCache cache(circuit, opt.snapshot_interval, opt.snapshot_budget_bytes, opt.sim);
    const Sampler ideal(cache.final_state());

    NoisySampleResult out;
    out.sample.n = n;
    out.sample.bitstrings.reserve(m);
    const std::size_t k = opt.shots_per_trajectory;
    for (std::uint64_t i = 0; out.sample.bitstrings.size() < m; ++i) {
        const Trajectory traj = trajectory_at(circuit, noise, seed, i);
        ++out.trajectories;
        std::optional<Sampler> own;
        if (!traj.ideal_state()) {
            own.emplace(cache.run(traj));
            ++out.simulated;
        }
        const Sampler& sampler = own ? *own : ideal;
        Stream shots(seed, "shot", i);
        const std::size_t take = std::min(k, m - out.sample.bitstrings.size());
        for (std::size_t j = 0; j < take; ++j) {
            const std::uint64_t mask = j == 0 ? traj.mes_mask : draw_mask(shots, noise.r_mes, n);
            out.sample.bitstrings.push_back(sampler.draw(shots) ^ mask);
        }
    }
    return out;
}

ProbVector average_noisy_distribution(const Circuit& circuit, const NoiseModel& noise,
                                      std::size_t n_traj, std::uint64_t seed,
                                      const SimOptions& opt) {
    noise.validate();
    if (n_traj == 0) throw ConfigError("need at least one trajectory");
    const SnapshotCache cache(circuit, 0, std::size_t{512} << 20, opt);
    const std::uint64_t size = std::uint64_t{1} << circuit.num_qubits();
    std::vector<double> acc(size, 0.0);
    for (std::uint64_t i = 0; i < n_traj; ++i) {
        const Trajectory traj = trajectory_at(circuit, noise, seed, i);
        const auto p = probabilities(traj.ideal_state() ? cache.final_state() : cache.run(traj));
        for (std::uint64_t x = 0; x < size; ++x) acc[x ^ traj.mes_mask] += p.p[x];
    }
    for (double& v : acc) v /= static_cast<double>(n_traj);
    return {circuit.num_qubits(), std::move(acc)};
}

ProbVector single_error_distribution(const Circuit& circuit, const ErrorLocation& loc,
                                     const SimOptions& opt) {
    return probabilities(simulate(insert_pauli_error(circuit, loc), opt));
}

std::vector<ErrorLocation> error_locations(const Circuit& circuit, std::size_t first,
                                           std::size_t last, const std::vector<Pauli>& paulis) {
    if (circuit.cycles.empty()) return {};
    last = std::min(last, circuit.cycles.size() - 1);
    std::vector<ErrorLocation> out;
    for (std::size_t t = first; t <= last; ++t)
        for (Qubit q = 0; q < circuit.num_qubits(); ++q)
            for (Pauli p : paulis) out.push_back({t, q, p});
    return out;
}

ProbVector average_single_error_distribution(const Circuit& circuit,
                                             const std::vector<ErrorLocation>& locs,
                                             const SimOptions& opt) {
    if (locs.empty()) throw ConfigError("no error locations");
    for (const auto& loc : locs) {
        if (loc.cycle >= circuit.cycles.size() || loc.qubit >= circuit.num_qubits())
            throw ConfigError("error location out of range");
    }
    auto sorted = locs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.cycle < b.cycle; });

    const std::uint64_t size = std::uint64_t{1} << circuit.num_qubits();
    std::vector<double> acc(size, 0.0);
    StateVector ideal(circuit.num_qubits());
    std::size_t done = 0;  // cycles applied to `ideal`
    const std::span<const Cycle> all(circuit.cycles);
    for (const auto& loc : sorted) {
        if (done <= loc.cycle) {
            apply_cycles(ideal, all.subspan(done, loc.cycle + 1 - done), done, {}, opt);
            done = loc.cycle + 1;
        }
        StateVector s = ideal;
        apply_single_qubit(s, pauli_gate(loc.pauli), loc.qubit, opt);
        apply_cycles(s, all.subspan(loc.cycle + 1), loc.cycle + 1, {}, opt);
        const auto amps = s.amplitudes();
        for (std::uint64_t x = 0; x < size; ++x) acc[x] += std::norm(amps[x]);
    }
    for (double& v : acc) v /= static_cast<double>(sorted.size());
    return {circuit.num_qubits(), std::move(acc)};
}

std::string bitstring(std::uint64_t x, unsigned n) {
    std::string s(n, '0');
    for (unsigned q = 0; q < n; ++q)
        if ((x >> q) & 1) s[q] = '1';
    return s;
}

std::uint64_t parse_bitstring(std::string_view s, unsigned n) {
    if (s.size() != n)
        throw ConfigError("bitstring '" + std::string(s) + "' has length " +
                          std::to_string(s.size()) + ", expected " + std::to_string(n));
    std::uint64_t x = 0;
    for (unsigned q = 0; q < n; ++q) {
        if (s[q] == '1')
            x |= std::uint64_t{1} << q;
        else if (s[q] != '0')
            throw ConfigError("bitstring '" + std::string(s) + "' has a character other than 0/1");
    }
    return x;
}

void write_samples(std::ostream& out, const Sample& sample, std::uint64_t seed) {
    out << "#n=" << sample.n << " m=" << sample.bitstrings.size() << " seed=" << seed << '\n';
    for (std::uint64_t x : sample.bitstrings) out << bitstring(x, sample.n) << '\n';
}

SampleFile read_samples(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty sample file", 1, "header");
    SampleFile f;
    std::size_t m = 0;
    {
        unsigned n = 0;
        unsigned long long mm = 0, seed = 0;
        if (std::sscanf(line.c_str(), "#n=%u m=%llu seed=%llu", &n, &mm, &seed) != 3)
            throw ParseError("expected '#n=<n> m=<m> seed=<seed>'", 1, "header");
        if (n == 0 || n > 63) throw ParseError("qubit count out of range", 1, "n");
        f.sample.n = n;
        f.seed = seed;
        m = mm;
    }
    f.sample.bitstrings.reserve(m);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        try {
            f.sample.bitstrings.push_back(parse_bitstring(line, f.sample.n));
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), lineno, "bitstring");
        }
    }
    if (f.sample.bitstrings.size() != m)
        throw ParseError("header promises " + std::to_string(m) + " bitstrings, found " +
                             std::to_string(f.sample.bitstrings.size()),
                         lineno, "m");
    if (m == 0) throw ParseError("sample is empty", 1, "m");
    return f;
}

}  // namespace xeb
