#include "xeb/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "xeb/error.hpp"
#include "xeb/parallel.hpp"

namespace xeb {

namespace {

constexpr std::uint32_t kFixed0 = PhaseTerm::kFixed0;
constexpr std::uint32_t kBoundary = PhaseTerm::kBoundary;

unsigned mod8(std::int64_t u) { return static_cast<unsigned>(((u % 8) + 8) % 8); }

// Phase of one gate in units of pi/4, for input bit a and output bit b
// (two-sparse gates) or operand bits a, b (T ignores b). Unreduced.
std::int64_t term_value(GateKind kind, int a, int b) {
    switch (kind) {
        case GateKind::H: return 4 * a * b;
        case GateKind::XHalf: return a == b ? 1 : -1;
        case GateKind::YHalf: return 1 + 4 * a * (1 - b);
        case GateKind::T: return a;
        case GateKind::CZ: return 4 * a * b;
        default: break;
    }
    throw ConfigError("gate kind has no phase rule");
}

bool is_variable(std::uint32_t v) { return v != kFixed0 && v != PhaseTerm::kFixed1; }

int fixed_value(std::uint32_t v) { return v == PhaseTerm::kFixed1 ? 1 : 0; }

// Bit of operand v given the free bits and the output bitstring.
int operand_bit(std::uint32_t v, const std::vector<std::uint8_t>& bits, std::uint64_t x) {
    if (!is_variable(v)) return fixed_value(v);
    if (v >= kBoundary) return static_cast<int>((x >> (v - kBoundary)) & 1u);
    return bits[v];
}

const std::array<std::complex<double>, kPhaseSectors>& sector_phases() {
    static const std::array<std::complex<double>, kPhaseSectors> table = [] {
        const double h = std::numbers::sqrt2 / 2;
        return std::array<std::complex<double>, kPhaseSectors>{
            {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}}};
    }();
    return table;
}

struct Neighbor {
    std::uint32_t v;
    unsigned w;  // mod 8
};

std::vector<std::vector<Neighbor>> neighbor_lists(const IsingModel& model) {
    std::vector<std::vector<Neighbor>> adj(model.n_free);
    for (const IsingCoupling& c : model.couplings) {
        const unsigned w = mod8(c.units);
        if (w == 0) continue;
        adj[c.a].push_back({c.b, w});
        adj[c.b].push_back({c.a, w});
    }
    return adj;
}

std::vector<unsigned> field_vector(const IsingModel& model) {
    std::vector<unsigned> f(model.n_free, 0);
    for (const IsingField& h : model.fields) f[h.v] = mod8(h.units);
    return f;
}

}  // namespace

IsingModel map_to_ising(const Circuit& circuit, std::uint64_t x) {
    const unsigned n = circuit.num_qubits();
    if (n == 0 || n > 63) throw ConfigError("qubit count out of range for the Ising mapping");
    if (x >> n) throw ConfigError("output bitstring has bits beyond the qubit count");

    IsingModel m;
    m.n = n;
    m.x = x;
    m.worldlines.resize(n);
    for (Qubit q = 0; q < n; ++q) m.worldlines[q].qubit = q;
    for (std::size_t t = 0; t < circuit.cycles.size(); ++t) {
        for (const Gate& g : circuit.cycles[t]) {
            if (g.q0 >= n || (g.arity() == 2 && g.q1 >= n))
                throw ConfigError("gate qubit out of range");
            if (is_two_sparse(g.kind))
                m.worldlines[g.q0].vertex_cycles.push_back(t);
            else if (g.kind != GateKind::T && g.kind != GateKind::CZ)
                throw ConfigError("gate " + std::string(gate_name(g.kind)) +
                                  " is not supported by the Ising mapping");
        }
    }
    for (Worldline& w : m.worldlines) {
        w.d = w.vertex_cycles.empty() ? 0 : static_cast<std::uint32_t>(w.vertex_cycles.size() - 1);
        w.first_vertex = m.n_free;
        for (std::uint32_t k = 0; k < w.d; ++k)
            m.vertices.push_back({w.qubit, k, w.vertex_cycles[k]});
        m.n_free += w.d;
        m.g_sparse += static_cast<std::uint32_t>(w.vertex_cycles.size());
        if (w.vertex_cycles.empty() && ((x >> w.qubit) & 1u)) m.vanishes = true;
    }

    // Gate script: each qubit's current variable, advanced by two-sparse gates.
    std::vector<std::uint32_t> cur(n, kFixed0);
    std::vector<std::uint32_t> seen(n, 0);
    for (const Cycle& cycle : circuit.cycles) {
        for (const Gate& g : cycle) {
            if (is_two_sparse(g.kind)) {
                const Worldline& w = m.worldlines[g.q0];
                const std::uint32_t k = seen[g.q0]++;
                const std::uint32_t next = k < w.d ? w.first_vertex + k : kBoundary + g.q0;
                m.script.push_back({g.kind, cur[g.q0], next});
                cur[g.q0] = next;
            } else if (g.kind == GateKind::T) {
                m.script.push_back({g.kind, cur[g.q0], kFixed0});
            } else {
                m.script.push_back({g.kind, cur[g.q0], cur[g.q1]});
            }
        }
    }

    // Quadratic form by finite differences, term by term. Variables are free
    // spins and boundary bits.
    std::int64_t constant = 0;
    std::map<std::uint32_t, std::int64_t> field;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> coupling;
    for (const PhaseTerm& term : m.script) {
        const std::uint32_t a = term.a;
        const std::uint32_t b = term.kind == GateKind::T ? kFixed0 : term.b;
        auto value = [&](int va, int vb) {
            return term_value(term.kind, is_variable(a) ? va : fixed_value(a),
                              is_variable(b) ? vb : fixed_value(b));
        };
        const std::int64_t f00 = value(0, 0);
        constant += f00;
        if (is_variable(a)) field[a] += value(1, 0) - f00;
        if (is_variable(b)) field[b] += value(0, 1) - f00;
        if (is_variable(a) && is_variable(b)) {
            const std::int64_t w = value(1, 1) - value(1, 0) - value(0, 1) + f00;
            if (a == b)
                field[a] += w;  // b^2 = b
            else
                coupling[std::minmax(a, b)] += w;
        }
    }

    // Pin the boundary bits to x.
    auto xbit = [&](std::uint32_t v) -> std::int64_t { return (x >> (v - kBoundary)) & 1u; };
    std::map<std::uint32_t, std::int64_t> free_field;
    for (auto [v, f] : field) {
        if (v >= kBoundary)
            constant += f * xbit(v);
        else
            free_field[v] += f;
    }
    for (auto [ab, w] : coupling) {
        auto [a, b] = ab;  // a < b, so boundary variables sort last
        if (w == 0) continue;
        if (a >= kBoundary) {
            constant += w * xbit(a) * xbit(b);
        } else if (b >= kBoundary) {
            m.boundary_couplings.push_back({a, b - kBoundary, w});
            free_field[a] += w * xbit(b);
        } else {
            m.couplings.push_back({a, b, w});
        }
    }
    for (auto [v, f] : free_field)
        if (f != 0) m.fields.push_back({v, f});
    m.constant = constant;
    return m;
}

unsigned script_units(const IsingModel& model, const std::vector<std::uint8_t>& bits) {
    if (bits.size() != model.n_free) throw ConfigError("spin assignment has the wrong length");
    std::int64_t u = 0;
    for (const PhaseTerm& t : model.script)
        u += term_value(t.kind, operand_bit(t.a, bits, model.x),
                        t.kind == GateKind::T ? 0 : operand_bit(t.b, bits, model.x));
    return mod8(u);
}

unsigned phase_units(const IsingModel& model, const std::vector<std::uint8_t>& bits) {
    if (bits.size() != model.n_free) throw ConfigError("spin assignment has the wrong length");
    std::int64_t u = model.constant;
    for (const IsingField& f : model.fields) u += f.units * bits[f.v];
    for (const IsingCoupling& c : model.couplings) u += c.units * bits[c.a] * bits[c.b];
    return mod8(u);
}

std::array<std::uint64_t, kPhaseSectors> sector_counts(const IsingModel& model) {
    const std::uint32_t nf = model.n_free;
    if (nf > kPathSumCap)
        throw CapacityError("path sum over " + std::to_string(nf) + " free spins exceeds the cap of " +
                            std::to_string(kPathSumCap));
    const auto adj = neighbor_lists(model);
    const auto f = field_vector(model);

    // Gray-code walk over fixed chunks; each chunk starts from scratch.
    const unsigned chunk_bits = std::min<unsigned>(nf, 14);
    const std::uint64_t chunk = std::uint64_t{1} << chunk_bits;
    const auto chunks = static_cast<std::int64_t>((std::uint64_t{1} << nf) >> chunk_bits);
    std::vector<std::array<std::uint64_t, kPhaseSectors>> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (chunks > 1)
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        std::array<std::uint64_t, kPhaseSectors> counts{};
        std::vector<std::uint8_t> b(nf);
        std::vector<unsigned> local(nf);
        const std::uint64_t begin = static_cast<std::uint64_t>(ci) * chunk;
        const std::uint64_t gray = begin ^ (begin >> 1);
        unsigned units = 0;
        for (std::uint32_t v = 0; v < nf; ++v) b[v] = static_cast<std::uint8_t>((gray >> v) & 1u);
        for (std::uint32_t v = 0; v < nf; ++v) {
            unsigned l = f[v];
            for (const Neighbor& nb : adj[v]) l += nb.w * b[nb.v];
            local[v] = l % 8;
        }
        for (std::uint32_t v = 0; v < nf; ++v) units += b[v] * f[v];
        for (std::uint32_t v = 0; v < nf; ++v)
            for (const Neighbor& nb : adj[v])
                if (nb.v > v) units += nb.w * b[v] * b[nb.v];
        units %= 8;
        for (std::uint64_t i = begin;; ++i) {
            ++counts[units];
            if (i + 1 == begin + chunk) break;
            const auto v = static_cast<std::uint32_t>(std::countr_zero(i + 1));
            // Flipping v changes the phase by +-local[v] and shifts its
            // neighbours' local fields by +-w.
            if (b[v]) {
                units = (units + 8 - local[v]) % 8;
                for (const Neighbor& nb : adj[v]) local[nb.v] = (local[nb.v] + 8 - nb.w) % 8;
            } else {
                units = (units + local[v]) % 8;
                for (const Neighbor& nb : adj[v]) local[nb.v] = (local[nb.v] + nb.w) % 8;
            }
            b[v] ^= 1u;
        }
        partial[static_cast<std::size_t>(ci)] = counts;
    }
    std::array<std::uint64_t, kPhaseSectors> total{};
    for (const auto& p : partial)
        for (unsigned k = 0; k < kPhaseSectors; ++k) total[k] += p[k];
    return total;
}

std::complex<double> path_sum_amplitude(const IsingModel& model) {
    const auto counts = sector_counts(model);
    if (model.vanishes) return {0.0, 0.0};
    const auto& phase = sector_phases();
    std::complex<double> z{0.0, 0.0};
    for (unsigned k = 0; k < kPhaseSectors; ++k) z += static_cast<double>(counts[k]) * phase[k];
    return z * phase[mod8(model.constant)] * std::pow(2.0, -0.5 * model.g_sparse);
}

PhaseHistogram phase_histogram(const IsingModel& model, std::uint64_t q, Stream& rng,
                               bool exhaustive) {
    PhaseHistogram h;
    h.n = model.n;
    h.g_sparse = model.g_sparse;
    h.x = model.x;
    if (exhaustive) {
        h.counts = sector_counts(model);
        h.q = std::uint64_t{1} << model.n_free;
        return h;
    }
    if (q == 0) throw ConfigError("phase histogram needs at least one sample");
    constexpr std::uint64_t kChunk = std::uint64_t{1} << 14;
    const std::uint64_t base = rng.next_u64();
    const auto chunks = static_cast<std::int64_t>((q + kChunk - 1) / kChunk);
    const std::uint32_t nf = model.n_free;
    const unsigned c0 = mod8(model.constant);
    std::vector<std::array<std::uint64_t, kPhaseSectors>> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (chunks > 1)
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        Stream s(base, "paths", static_cast<std::uint64_t>(ci));
        std::array<std::uint64_t, kPhaseSectors> counts{};
        std::vector<std::uint8_t> bits(nf);
        const std::uint64_t lo = static_cast<std::uint64_t>(ci) * kChunk;
        const std::uint64_t hi = std::min(q, lo + kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            for (std::uint32_t v = 0; v < nf; v += 64) {
                const std::uint64_t word = s.next_u64();
                for (std::uint32_t j = 0; j < 64 && v + j < nf; ++j)
                    bits[v + j] = static_cast<std::uint8_t>((word >> j) & 1u);
            }
            ++counts[(phase_units(model, bits) + 8 - c0) % 8];
        }
        partial[static_cast<std::size_t>(ci)] = counts;
    }
    for (const auto& p : partial)
        for (unsigned k = 0; k < kPhaseSectors; ++k) h.counts[k] += p[k];
    h.q = q;
    return h;
}

std::array<double, kPhaseSectors> rho_bar(const PhaseHistogram& hist) {
    if (hist.q == 0) throw ConfigError("empty phase histogram");
    std::array<double, kPhaseSectors> rho{};
    double a = 0.0, b = 0.0;
    for (unsigned j = 0; j < kPhaseSectors; ++j) {
        rho[j] = static_cast<double>(hist.counts[j]) / static_cast<double>(hist.q) - 1.0 / kPhaseSectors;
        const double th = 2 * std::numbers::pi * j / kPhaseSectors;
        a += rho[j] * std::cos(th);
        b += rho[j] * std::sin(th);
    }
    // cos and sin modes each have squared norm K/2 = 4
    for (unsigned j = 0; j < kPhaseSectors; ++j) {
        const double th = 2 * std::numbers::pi * j / kPhaseSectors;
        rho[j] -= (a * std::cos(th) + b * std::sin(th)) / (kPhaseSectors / 2.0);
    }
    return rho;
}

double bayesian_alpha(const PhaseHistogram& hist, const std::array<double, kPhaseSectors>& rho) {
    if (hist.q == 0) throw ConfigError("empty phase histogram");
    double s = 0.0;
    for (unsigned j1 = 0; j1 < kPhaseSectors; ++j1)
        for (unsigned j2 = 0; j2 < kPhaseSectors; ++j2) {
            const double th = 2 * std::numbers::pi * (static_cast<double>(j1) - j2) / kPhaseSectors;
            s += static_cast<double>(hist.counts[j1]) * static_cast<double>(hist.counts[j2]) *
                 std::cos(th) / ((kPhaseSectors * rho[j1] + 1) * (kPhaseSectors * rho[j2] + 1));
        }
    return std::ldexp(s, -static_cast<int>(hist.n + hist.g_sparse));
}

std::vector<std::vector<std::uint32_t>> interaction_graph(const IsingModel& model) {
    std::vector<std::vector<std::uint32_t>> adj(model.n_free);
    for (const IsingCoupling& c : model.couplings) {
        if (mod8(c.units) == 0) continue;
        adj[c.a].push_back(c.b);
        adj[c.b].push_back(c.a);
    }
    return adj;
}

unsigned min_fill_width(std::vector<std::vector<std::uint32_t>> adj) {
    const std::size_t n = adj.size();
    std::vector<std::uint8_t> edge(n * n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::uint32_t u : adj[v]) {
            if (u >= n) throw ConfigError("adjacency refers to a missing vertex");
            if (u != v) edge[v * n + u] = edge[u * n + v] = 1;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        adj[v].clear();
        for (std::size_t u = 0; u < n; ++u)
            if (edge[v * n + u]) adj[v].push_back(static_cast<std::uint32_t>(u));
    }
    std::vector<std::uint8_t> alive(n, 1);
    unsigned width = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n, best_fill = 0, best_deg = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            std::size_t fill = 0;
            const auto& nb = adj[v];
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j)
                    if (!edge[std::size_t{nb[i]} * n + nb[j]]) ++fill;
            if (best == n || fill < best_fill || (fill == best_fill && nb.size() < best_deg)) {
                best = v;
                best_fill = fill;
                best_deg = nb.size();
            }
        }
        const auto nb = adj[best];
        width = std::max(width, static_cast<unsigned>(nb.size()));
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                const std::uint32_t a = nb[i], b = nb[j];
                if (edge[std::size_t{a} * n + b]) continue;
                edge[std::size_t{a} * n + b] = edge[std::size_t{b} * n + a] = 1;
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        for (std::uint32_t u : nb) {
            auto& l = adj[u];
            l.erase(std::find(l.begin(), l.end(), static_cast<std::uint32_t>(best)));
            edge[std::size_t{u} * n + best] = edge[best * n + u] = 0;
        }
        adj[best].clear();
        alive[best] = 0;
    }
    return width;
}

std::vector<LateralSegment> lateral_segments(const Circuit& circuit) {
    const unsigned n = circuit.num_qubits();
    std::vector<std::vector<std::size_t>> vc(n);
    std::map<std::pair<Qubit, Qubit>, std::vector<std::size_t>> cz_cycles;
    for (std::size_t t = 0; t < circuit.cycles.size(); ++t)
        for (const Gate& g : circuit.cycles[t]) {
            if (is_two_sparse(g.kind)) vc[g.q0].push_back(t);
            if (g.kind == GateKind::CZ) cz_cycles[std::minmax(g.q0, g.q1)].push_back(t);
        }
    const std::size_t end = circuit.cycles.size();
    std::vector<LateralSegment> out;
    for (Qubit i = 0; i < n; ++i)
        for (Qubit j = i + 1; j < n; ++j) {
            if (!circuit.lattice.adjacent(i, j) || vc[i].empty() || vc[j].empty()) continue;
            static const std::vector<std::size_t> kNone;
            const auto it = cz_cycles.find({i, j});
            const auto& czs = it == cz_cycles.end() ? kNone : it->second;
            auto next = [&](const std::vector<std::size_t>& v, std::size_t k) {
                return k + 1 < v.size() ? v[k + 1] : end;
            };
            std::size_t k = 0, l = 0;
            while (true) {
                LateralSegment s;
                s.i = i;
                s.j = j;
                s.k = static_cast<std::uint32_t>(k);
                s.l = static_cast<std::uint32_t>(l);
                s.first_cycle = std::max(vc[i][k], vc[j][l]);
                s.end_cycle = std::min(next(vc[i], k), next(vc[j], l));
                s.cz = static_cast<std::uint32_t>(
                    std::lower_bound(czs.begin(), czs.end(), s.end_cycle) -
                    std::lower_bound(czs.begin(), czs.end(), s.first_cycle));
                s.interior = s.first_cycle > 0 && s.end_cycle < end;
                out.push_back(s);
                if (s.end_cycle == end) break;
                if (next(vc[i], k) == s.end_cycle) ++k;
                if (next(vc[j], l) == s.end_cycle) ++l;
            }
        }
    return out;
}

double CouplingStatistics::empirical(std::size_t r) const {
    if (segments == 0 || r >= counts.size()) return 0.0;
    return static_cast<double>(counts[r]) / static_cast<double>(segments);
}

double CouplingStatistics::sigma(std::size_t r) const {
    if (segments == 0) return 0.0;
    const double p = empirical(r);
    return std::sqrt(p * (1 - p) / static_cast<double>(segments));
}

namespace {

struct Moments {
    double count = 0, mean = 0, m2 = 0;
};

Moments lk_moments(const std::vector<std::vector<std::uint64_t>>& lk, unsigned k, bool diff) {
    Moments m;
    if (k >= lk.size()) return m;
    for (std::size_t l = 0; l < lk[k].size(); ++l) {
        const double c = static_cast<double>(lk[k][l]);
        const double v = diff ? static_cast<double>(k) - static_cast<double>(l) : static_cast<double>(l);
        m.count += c;
        m.mean += c * v;
        m.m2 += c * v * v;
    }
    if (m.count > 0) {
        m.mean /= m.count;
        m.m2 = m.m2 / m.count - m.mean * m.mean;
    }
    return m;
}

}  // namespace

double CouplingStatistics::mean_k_minus_l(unsigned k) const { return lk_moments(lk, k, true).mean; }

double CouplingStatistics::var_k_minus_l(unsigned k) const {
    const Moments m = lk_moments(lk, k, true);
    return m.count > 1 ? m.m2 * m.count / (m.count - 1) : 0.0;
}

double CouplingStatistics::mean_l(unsigned k) const { return lk_moments(lk, k, false).mean; }

double coupling_probability(std::size_t r, double p_cz) {
    const double z = 1 + p_cz / 8;
    if (r == 0) return (1 - p_cz) / z;
    return 9 / z * std::pow(p_cz / 8 / z, static_cast<double>(r));
}

double lk_gaussian(unsigned l, unsigned k) {
    const double s = static_cast<double>(k) + l;
    const double d = static_cast<double>(k) - l;
    return std::sqrt(3 / (2 * std::numbers::pi * s)) * std::exp(-3 * d * d / (2 * s));
}

CouplingStatistics coupling_statistics(const Lattice& lattice, std::size_t depth, double p_cz,
                                       std::size_t n_models, std::uint64_t seed, unsigned k_max) {
    if (!(p_cz >= 0.0 && p_cz <= 1.0)) throw ConfigError("p_cz must lie in [0, 1]");
    CouplingStatistics st;
    st.p_cz = p_cz;
    st.n_models = n_models;
    st.lk.assign(k_max + 1, std::vector<std::uint64_t>(depth + 2, 0));
    const unsigned n = lattice.num_qubits();
    for (std::size_t mi = 0; mi < n_models; ++mi) {
        Stream s(seed, "models", mi);
        const Circuit c = generate_circuit(lattice, depth, s.next_u64(), Variant::StatEnsemble, {p_cz});
        // Segments starting within kTail layers of the end are dropped rather
        // than the unclosed ones, which would bias against long segments.
        constexpr std::size_t kTail = 10;
        const std::size_t last_start = depth > kTail ? 2 * (depth - kTail) : 0;
        for (const LateralSegment& seg : lateral_segments(c)) {
            if (seg.first_cycle == 0 || seg.first_cycle > last_start) continue;
            if (seg.cz >= st.counts.size()) st.counts.resize(seg.cz + 1, 0);
            ++st.counts[seg.cz];
            ++st.segments;
        }
        std::vector<std::vector<std::size_t>> vc(n);
        for (std::size_t t = 0; t < c.cycles.size(); ++t)
            for (const Gate& g : c.cycles[t])
                if (is_two_sparse(g.kind)) vc[g.q0].push_back(t);
        for (Qubit i = 0; i < n; ++i)
            for (Qubit j = 0; j < n; ++j) {
                if (i == j || !lattice.adjacent(i, j)) continue;
                for (unsigned k = 1; k <= k_max && k < vc[i].size(); ++k) {
                    const std::size_t t = vc[i][k];
                    // vertices of j up to and including t, without the Hadamard
                    const auto l = static_cast<std::size_t>(
                        std::upper_bound(vc[j].begin(), vc[j].end(), t) - vc[j].begin() - 1);
                    ++st.lk[k][l];
                }
            }
    }
    return st;
}

std::string ising_to_json(const IsingModel& model) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["n_free"] = model.n_free;
    doc["g_sparse"] = model.g_sparse;
    ojson verts = ojson::array();
    for (const IsingVertex& v : model.vertices)
        verts.push_back({{"qubit", v.qubit}, {"k", v.k}, {"cycle", v.cycle}});
    doc["vertices"] = std::move(verts);
    ojson couplings = ojson::array();
    for (const IsingCoupling& c : model.couplings)
        couplings.push_back({{"a", c.a}, {"b", c.b}, {"units", c.units}});
    doc["couplings"] = std::move(couplings);
    ojson fields = ojson::array();
    for (const IsingField& f : model.fields) fields.push_back({{"v", f.v}, {"units", f.units}});
    doc["fields"] = std::move(fields);
    ojson boundary = ojson::array();
    for (const BoundaryCoupling& b : model.boundary_couplings)
        boundary.push_back({{"v", b.v}, {"qubit", b.qubit}, {"units", b.units}});
    doc["boundary_couplings"] = std::move(boundary);
    doc["constant_units"] = model.constant;
    doc["vanishes"] = model.vanishes;
    std::string x(model.n, '0');
    for (unsigned q = 0; q < model.n; ++q)
        if ((model.x >> q) & 1u) x[q] = '1';
    doc["x"] = x;
    return doc.dump(2);
}

}  // namespace xeb
