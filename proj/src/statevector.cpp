#include "xeb/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "xeb/error.hpp"
#include "xeb/parallel.hpp"

namespace xeb {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Work items per parallel chunk. A multiple of kKernelGrain, so partitions
// never split a SIMD pair and results do not depend on the thread count.
constexpr std::uint64_t kChunkItems = std::uint64_t{1} << 14;

template <typename F>
void for_chunks(std::uint64_t items, F&& f) {
    const int threads = thread_count();
    if (threads <= 1 || items <= kChunkItems) {
        f(std::uint64_t{0}, items);
        return;
    }
    const auto chunks = static_cast<std::int64_t>((items + kChunkItems - 1) / kChunkItems);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunkItems;
        f(lo, std::min(items, lo + kChunkItems));
    }
}

const KernelTable& table(const SimOptions& opt) {
    return opt.kernels != nullptr ? *opt.kernels : active_kernels();
}

void check_qubit(const StateVector& s, unsigned q) {
    if (q >= s.num_qubits())
        throw ConfigError("qubit " + std::to_string(q) + " out of range for " +
                          std::to_string(s.num_qubits()) + " qubits");
}

const cplx kT{kInvSqrt2, kInvSqrt2};

// Runs one gate on the 2^n amplitudes at `a`, restricted to items [lo, hi).
void run_gate(const KernelTable& k, KernelMode mode, cplx* a, const Gate& g, std::uint64_t lo,
              std::uint64_t hi) {
    if (g.kind == GateKind::CZ) {
        const unsigned q0 = std::min(g.q0, g.q1), q1 = std::max(g.q0, g.q1);
        k.cz(a, q0, q1, lo, hi);
        return;
    }
    const unsigned q = g.q0;
    if (mode == KernelMode::Generic) {
        k.matrix(a, q, gate_matrix(g.kind), lo, hi);
        return;
    }
    switch (g.kind) {
        case GateKind::H:
            k.real_matrix(a, q, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}, lo, hi);
            break;
        case GateKind::X:
            k.real_matrix(a, q, {0.0, 1.0, 1.0, 0.0}, lo, hi);
            break;
        case GateKind::T:
            k.phase(a, q, kT, lo, hi);
            break;
        case GateKind::Z:
            k.phase(a, q, cplx{-1.0, 0.0}, lo, hi);
            break;
        default:
            k.matrix(a, q, gate_matrix(g.kind), lo, hi);
            break;
    }
}

std::uint64_t gate_items(const Gate& g, unsigned n) {
    return std::uint64_t{1} << (n - g.arity());
}

void apply_one(StateVector& s, const Gate& g, const SimOptions& opt) {
    const KernelTable& k = table(opt);
    cplx* a = s.amplitudes().data();
    for_chunks(gate_items(g, s.num_qubits()),
               [&](std::uint64_t lo, std::uint64_t hi) { run_gate(k, opt.mode, a, g, lo, hi); });
}

// Applies gates that all act below qubit b, one 2^b-amplitude block at a time.
void apply_blocked(StateVector& s, std::span<const Gate> gates, unsigned b,
                   const SimOptions& opt) {
    if (gates.empty()) return;
    const unsigned n = s.num_qubits();
    if (b >= n || gates.size() == 1) {
        for (const Gate& g : gates) apply_one(s, g, opt);
        return;
    }
    const KernelTable& k = table(opt);
    cplx* a = s.amplitudes().data();
    const std::uint64_t block = std::uint64_t{1} << b;
    // Enough blocks per task to amortise the dispatch.
    const std::uint64_t blocks = std::uint64_t{1} << (n - b);
    const std::uint64_t per_task = std::clamp<std::uint64_t>(kChunkItems / block, 1, blocks);
    for_chunks(blocks / per_task, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t blk = lo * per_task; blk < hi * per_task; ++blk) {
            cplx* base = a + blk * block;
            for (const Gate& g : gates) run_gate(k, opt.mode, base, g, 0, gate_items(g, b));
        }
    });
}

enum class Reach { Low, High, Mixed };

Reach reach(const Gate& g, unsigned b) {
    const bool lo0 = g.q0 < b;
    if (g.arity() == 1) return lo0 ? Reach::Low : Reach::High;
    const bool lo1 = g.q1 < b;
    if (lo0 && lo1) return Reach::Low;
    if (!lo0 && !lo1) return Reach::High;
    return Reach::Mixed;
}

void check_gate(const StateVector& s, const Gate& g) {
    check_qubit(s, g.q0);
    if (g.arity() == 2) {
        check_qubit(s, g.q1);
        if (g.q0 == g.q1) throw ConfigError("two-qubit gate needs distinct qubits");
    }
}

// Fused execution over a sequence of cycles. A pending group of low gates is
// flushed before any gate that spans both halves; purely high gates touch
// none of the group's qubits and commute with it. With an observer the group
// is also flushed at every cycle boundary.
class Runner {
public:
    Runner(StateVector& s, const SimOptions& opt) : s_(s), opt_(opt), b_(opt.block_qubits) {}

    void add(const Gate& g) {
        check_gate(s_, g);
        if (!opt_.fuse) {
            apply_one(s_, g, opt_);
            return;
        }
        switch (reach(g, b_)) {
            case Reach::Low:
                pending_.push_back(g);
                break;
            case Reach::High:
                apply_one(s_, g, opt_);
                break;
            case Reach::Mixed:
                flush();
                apply_one(s_, g, opt_);
                break;
        }
    }

    void flush() {
        apply_blocked(s_, pending_, b_, opt_);
        pending_.clear();
    }

private:
    StateVector& s_;
    const SimOptions& opt_;
    unsigned b_;
    std::vector<Gate> pending_;
};

}  // namespace

StateVector::StateVector(unsigned n, unsigned cap) : n_(n) {
    if (n == 0) throw CapacityError("state needs at least one qubit");
    if (n > cap || n >= 63)
        throw CapacityError(std::to_string(n) + " qubits exceeds the cap of " +
                            std::to_string(cap));
    amps_.assign(std::uint64_t{1} << n, cplx{});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(unsigned n, std::uint64_t index, unsigned cap) {
    StateVector s(n, cap);
    if (index >= s.size()) throw ConfigError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

cplx StateVector::amplitude(std::uint64_t x) const {
    if (x >= size())
        throw ConfigError("bitstring index " + std::to_string(x) + " out of range");
    return amps_[x];
}

double StateVector::norm_squared() const {
    return deterministic_sum(amps_.size(), [&](std::size_t i) { return std::norm(amps_[i]); });
}

Mat2 gate_matrix(GateKind kind) {
    const cplx i{0.0, 1.0};
    switch (kind) {
        case GateKind::H:
            return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
        case GateKind::XHalf:
            return {0.5 * (1.0 + i), 0.5 * (1.0 - i), 0.5 * (1.0 - i), 0.5 * (1.0 + i)};
        case GateKind::YHalf:
            return {0.5 * (1.0 + i), -0.5 * (1.0 + i), 0.5 * (1.0 + i), 0.5 * (1.0 + i)};
        case GateKind::T:
            return {1.0, 0.0, 0.0, kT};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y:
            return {0.0, -i, i, 0.0};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::CZ:
            break;
    }
    throw ConfigError("CZ has no 2x2 matrix");
}

void apply_matrix(StateVector& state, const Mat2& m, unsigned q, const SimOptions& opt) {
    check_qubit(state, q);
    const KernelTable& k = table(opt);
    cplx* a = state.amplitudes().data();
    for_chunks(state.size() / 2,
               [&](std::uint64_t lo, std::uint64_t hi) { k.matrix(a, q, m, lo, hi); });
}

void apply_single_qubit(StateVector& state, GateKind kind, unsigned q, const SimOptions& opt) {
    if (is_two_qubit(kind)) throw ConfigError("apply_single_qubit given a two-qubit gate");
    const Gate g = Gate::single(kind, q);
    check_gate(state, g);
    apply_one(state, g, opt);
}

void apply_cz(StateVector& state, unsigned q1, unsigned q2, const SimOptions& opt) {
    const Gate g = Gate::cz(q1, q2);
    check_gate(state, g);
    apply_one(state, g, opt);
}

void apply_gate(StateVector& state, const Gate& gate, const SimOptions& opt) {
    check_gate(state, gate);
    apply_one(state, gate, opt);
}

void apply_cycles(StateVector& state, std::span<const Cycle> cycles, std::size_t first_index,
                  const CycleObserver& observer, const SimOptions& opt) {
    Runner run(state, opt);
    for (std::size_t t = 0; t < cycles.size(); ++t) {
        for (const Gate& g : cycles[t]) run.add(g);
        if (observer) {
            run.flush();
            observer(first_index + t, state);
        }
    }
    run.flush();
}

void apply_circuit(StateVector& state, const Circuit& circuit, const CycleObserver& observer,
                   const SimOptions& opt) {
    if (circuit.num_qubits() != state.num_qubits())
        throw ConfigError("circuit has " + std::to_string(circuit.num_qubits()) +
                          " qubits but the state has " + std::to_string(state.num_qubits()));
    apply_cycles(state, circuit.cycles, 0, observer, opt);
}

StateVector simulate(const Circuit& circuit, const SimOptions& opt, unsigned cap) {
    StateVector s(circuit.num_qubits(), cap);
    apply_circuit(s, circuit, {}, opt);
    return s;
}

ProbVector probabilities(const StateVector& state) {
    ProbVector out{state.num_qubits(), std::vector<double>(state.size())};
    const auto amps = state.amplitudes();
    double* p = out.p.data();
    for_chunks(state.size(), [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) p[i] = std::norm(amps[i]);
    });
    return out;
}

Sampler::Sampler(const ProbVector& probs) : n_(probs.n) { build(probs.p); }

Sampler::Sampler(const StateVector& state) : n_(state.num_qubits()) {
    build(probabilities(state).p);
}

void Sampler::build(std::span<const double> weights) {
    if (weights.empty()) throw ConfigError("cannot sample from an empty distribution");
    cdf_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw ConfigError("negative or NaN probability");
        acc += weights[i];
        cdf_[i] = acc;
    }
    if (!(acc > 0.0)) throw ConfigError("distribution has zero total weight");
}

std::uint64_t Sampler::draw(Stream& rng) const {
    const double u = rng.uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint64_t>(it - cdf_.begin());
}

Sample Sampler::draw(std::size_t m, Stream& rng) const {
    if (m == 0) throw ConfigError("sample size must be at least 1");
    Sample s{n_, std::vector<std::uint64_t>(m)};
    for (auto& x : s.bitstrings) x = draw(rng);
    return s;
}

Sample sample(const ProbVector& probs, std::size_t m, Stream& rng) {
    return Sampler(probs).draw(m, rng);
}

Sample sample(const StateVector& state, std::size_t m, Stream& rng) {
    return Sampler(state).draw(m, rng);
}

namespace {

constexpr char kMagic[8] = {'X', 'E', 'B', 'S', 'V', '1', '\0', '\0'};

static_assert(std::endian::native == std::endian::little,
              "state dumps are written in host byte order");

}  // namespace

void dump_state(const StateVector& state, std::ostream& out) {
    const std::uint32_t header[2] = {state.num_qubits(), 0};
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    const auto amps = state.amplitudes();
    out.write(reinterpret_cast<const char*>(amps.data()),
              static_cast<std::streamsize>(amps.size() * sizeof(cplx)));
    if (!out) throw std::runtime_error("failed writing state dump");
}

StateVector load_state(std::istream& in, unsigned cap) {
    char magic[8];
    std::uint32_t header[2];
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(header), sizeof header);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw ParseError("not a state dump (bad magic)", 0, "header");
    const std::uint32_t n = header[0];
    if (n == 0 || n > cap || n >= 63)
        throw CapacityError("state dump has " + std::to_string(n) + " qubits, cap is " +
                            std::to_string(cap));
    std::vector<cplx> amps(std::uint64_t{1} << n);
    in.read(reinterpret_cast<char*>(amps.data()),
            static_cast<std::streamsize>(amps.size() * sizeof(cplx)));
    if (!in) throw ParseError("state dump truncated", 0, "amplitudes");
    return StateVector(n, std::move(amps));
}

}  // namespace xeb
