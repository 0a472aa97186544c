// xeb: command-line front end for circuit generation, simulation, noisy
// sampling, cross-entropy scoring and the Ising mapping.
//
// Exit codes: 0 success, 2 configuration error, 3 capacity error,
// 4 verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xeb/analysis.hpp"
#include "xeb/circuit.hpp"
#include "xeb/error.hpp"
#include "xeb/ising.hpp"
#include "xeb/noise.hpp"
#include "xeb/parallel.hpp"
#include "xeb/statevector.hpp"

#ifndef XEB_VERSION
#define XEB_VERSION "0.0.0"
#endif

using namespace xeb;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitVerify = 4;

struct RunConfig {
    std::string command;
    unsigned rows = 4;
    unsigned cols = 4;
    std::size_t depth = 20;
    std::uint64_t seed = 0;
    std::string variant = "sec4";
    std::string circuit_file;
    std::string out;
    std::string csv;
    int threads = 0;
    unsigned qubit_cap = kDefaultQubitCap;
    NoiseModel noise;
    std::size_t m = 1000;
    std::size_t shots = 1;
    // simulate
    std::string dump_state;
    // xeb / amplitude
    std::string samples;
    std::string state;
    std::vector<std::string> xs;
    bool path_sum = false;
    // sweep
    std::string seeds = "0:9";
    std::string sizes = "4x4";
    std::string rates = "0,0.005,0.01";
    double r1_ratio = 0.1;
    // ising
    std::string x;
    bool verify = false;
    bool treewidth = false;
    bool stats = false;
    std::uint64_t bayes = 0;
    double p_cz = 0.25;
    std::size_t models = 1000;
};

Variant parse_variant(const std::string& name) {
    const auto v = variant_from_name(name);
    if (!v) throw ConfigError("unknown variant '" + name + "' (expected sec4, dense or stat)");
    return *v;
}

Lattice lattice_of(const RunConfig& c) {
    return {c.rows, c.cols, parse_variant(c.variant) == Variant::Dense};
}

ojson config_json(const RunConfig& c) {
    ojson j;
    j["command"] = c.command;
    j["rows"] = c.rows;
    j["cols"] = c.cols;
    j["depth"] = c.depth;
    j["seed"] = c.seed;
    j["variant"] = c.variant;
    if (!c.circuit_file.empty()) j["circuit"] = c.circuit_file;
    j["threads"] = thread_count();
    j["qubit_cap"] = c.qubit_cap;
    j["noise"] = ojson::parse(to_json(c.noise));
    if (c.command == "sample" || c.command == "sweep") {
        j["m"] = c.m;
        j["shots_per_trajectory"] = c.shots;
    }
    if (c.command == "sweep") {
        j["seeds"] = c.seeds;
        j["sizes"] = c.sizes;
        j["rates"] = c.rates;
        j["r1_ratio"] = c.r1_ratio;
    }
    if (c.command == "ising") {
        j["x"] = c.x;
        j["verify"] = c.verify;
        j["treewidth"] = c.treewidth;
        j["stats"] = c.stats;
        j["bayes"] = c.bayes;
        j["p_cz"] = c.p_cz;
        j["models"] = c.models;
    }
    if (!c.samples.empty()) j["samples"] = c.samples;
    if (!c.state.empty()) j["state"] = c.state;
    return j;
}

ojson provenance(const RunConfig& c) {
    ojson j;
    j["tool"] = "xeb";
    j["version"] = XEB_VERSION;
    j["config"] = config_json(c);
    return j;
}

// One-line form of the provenance for '#' headers in text outputs.
std::string provenance_line(const RunConfig& c) { return "# " + provenance(c).dump(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

void validate(const RunConfig& c) {
    if (c.threads < 0) throw ConfigError("--threads must be >= 0");
    c.noise.validate();
    if (c.circuit_file.empty()) {
        if (c.rows == 0 || c.cols == 0) throw ConfigError("--rows and --cols must be positive");
        lattice_of(c).validate(parse_variant(c.variant));
    }
    if (c.m == 0) throw ConfigError("-m must be positive");
    if (c.shots == 0) throw ConfigError("--shots-per-trajectory must be positive");
    if (c.qubit_cap == 0 || c.qubit_cap > 40) throw ConfigError("--qubit-cap must lie in [1, 40]");
}

Circuit load_circuit(const RunConfig& c) {
    if (!c.circuit_file.empty()) {
        try {
            return parse_circuit(read_file(c.circuit_file));
        } catch (const ParseError& e) {
            throw ConfigError(c.circuit_file + ": " + e.what());
        }
    }
    return generate_circuit(lattice_of(c), c.depth, c.seed, parse_variant(c.variant));
}

ojson census_json(const GateCensus& k) {
    return {{"depth", k.depth}, {"g1", k.g1}, {"g1_total", k.g1_total}, {"g2", k.g2}, {"t_count", k.t_count}};
}

ojson report_json(const XebReport& r) {
    return {{"alpha", r.alpha}, {"h0", r.h0}, {"stderr", r.stderr_}, {"m", r.m}, {"n", r.n}, {"clamped", r.clamped}};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- generate ---------------------------------------------------------------

int cmd_generate(const RunConfig& c) {
    const Circuit circuit = load_circuit(c);
    ojson doc = ojson::parse(serialize(circuit));
    doc["provenance"] = provenance(c);
    const auto census = census_json(count_gates(circuit));
    doc["census"] = census;
    if (c.out.empty()) {
        std::cout << doc.dump() << "\n";
    } else {
        emit(c.out, doc.dump() + "\n");
        std::cout << ojson{{"census", census}, {"qubits", circuit.num_qubits()}}.dump(2) << "\n";
    }
    return 0;
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const RunConfig& c) {
    const Circuit circuit = load_circuit(c);
    const unsigned n = circuit.num_qubits();
    StateVector state = init_state(n, c.qubit_cap);
    std::vector<PtStats> trace;
    apply_circuit(state, circuit, [&](std::size_t cycle, const StateVector& s) {
        trace.push_back(pt_stats(probabilities(s), cycle));
    });
    const ProbVector p = probabilities(state);
    std::vector<double> entropies;
    for (const auto& s : trace) entropies.push_back(s.entropy);

    ojson doc = provenance(c);
    doc["qubits"] = n;
    doc["census"] = census_json(count_gates(circuit));
    doc["pt_entropy"] = pt_entropy(n);
    doc["entropy_band"] = pt_entropy_band(n);
    doc["final_entropy"] = entropies.empty() ? 0.0 : entropies.back();
    const auto conv = pt_convergence_depth(entropies, n);
    doc["convergence_depth"] = conv ? ojson(*conv) : ojson(nullptr);
    doc["delta_h"] = cross_entropy_difference(p.p, p.p).value;
    ojson tr = ojson::array();
    for (const auto& s : trace) {
        ojson row{{"cycle", s.cycle}, {"entropy", s.entropy}};
        for (unsigned k = 2; k <= 10; ++k) row["ipr" + std::to_string(k)] = s.ipr_k(k);
        tr.push_back(std::move(row));
    }
    doc["trace"] = std::move(tr);
    emit(c.out, doc.dump(2) + "\n");

    if (!c.csv.empty()) {
        std::ostringstream csv;
        csv << provenance_line(c) << "\ncycle,entropy";
        for (unsigned k = 2; k <= 10; ++k) csv << ",ipr" << k;
        csv << "\n";
        for (const auto& s : trace) {
            csv << s.cycle << "," << fmt(s.entropy);
            for (unsigned k = 2; k <= 10; ++k) csv << "," << fmt(s.ipr_k(k));
            csv << "\n";
        }
        emit(c.csv, csv.str());
    }
    if (!c.dump_state.empty()) {
        std::ofstream out(c.dump_state, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + c.dump_state + "'");
        dump_state(state, out);
    }
    return 0;
}

// --- sample / xeb -----------------------------------------------------------

int cmd_sample(const RunConfig& c) {
    const Circuit circuit = load_circuit(c);
    if (circuit.num_qubits() > c.qubit_cap)
        throw CapacityError(std::to_string(circuit.num_qubits()) + " qubits exceed the cap of " +
                            std::to_string(c.qubit_cap));
    NoisySampleOptions opt;
    opt.shots_per_trajectory = c.shots;
    const Sample s = noisy_sample(circuit, c.noise, c.m, c.seed, opt);
    std::ostringstream text;
    write_samples(text, s, c.seed);
    // keep the mandatory header first, provenance as a comment after it
    std::string body = text.str();
    const auto nl = body.find('\n');
    body.insert(nl + 1, provenance_line(c) + "\n");
    emit(c.out, body);
    return 0;
}

int cmd_xeb(const RunConfig& c) {
    if (c.samples.empty()) throw ConfigError("xeb needs --samples <file>");
    const Circuit circuit = load_circuit(c);
    std::ifstream in(c.samples);
    if (!in) throw ConfigError("cannot open '" + c.samples + "'");
    SampleFile f;
    try {
        f = read_samples(in);
    } catch (const ParseError& e) {
        throw ConfigError(c.samples + ": " + e.what());
    }
    if (f.sample.n != circuit.num_qubits())
        throw ConfigError("sample has " + std::to_string(f.sample.n) + " qubits, circuit has " +
                          std::to_string(circuit.num_qubits()));
    const ProbVector p = probabilities(simulate(circuit, {}, c.qubit_cap));
    const XebReport r = estimate_alpha(f.sample, p);
    ojson doc = provenance(c);
    doc["sample_seed"] = f.seed;
    doc["report"] = report_json(r);
    doc["predicted_fidelity"] = predicted_fidelity(count_gates(circuit), c.noise, circuit.num_qubits());
    emit(c.out, doc.dump(2) + "\n");
    return 0;
}

// --- sweep ------------------------------------------------------------------

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(spec);
    std::string item;
    try {
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                out.push_back(std::stoull(item));
            } else {
                const auto lo = std::stoull(item.substr(0, colon));
                const auto hi = std::stoull(item.substr(colon + 1));
                if (hi < lo) throw ConfigError("empty seed range '" + item + "'");
                for (auto s = lo; s <= hi; ++s) out.push_back(s);
            }
        }
    } catch (const std::logic_error&) {
        throw ConfigError("bad --seeds '" + spec + "' (expected e.g. 0:9 or 1,2,5)");
    }
    if (out.empty()) throw ConfigError("--seeds is empty");
    return out;
}

std::vector<std::pair<unsigned, unsigned>> parse_sizes(const std::string& spec) {
    std::vector<std::pair<unsigned, unsigned>> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        unsigned r = 0, c = 0;
        char tail = 0;
        if (std::sscanf(item.c_str(), "%ux%u%c", &r, &c, &tail) != 2 || r == 0 || c == 0)
            throw ConfigError("bad size '" + item + "' (expected ROWSxCOLS)");
        out.emplace_back(r, c);
    }
    if (out.empty()) throw ConfigError("--sizes is empty");
    return out;
}

std::vector<double> parse_rates(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    try {
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
        throw ConfigError("bad --rates '" + spec + "'");
    }
    if (out.empty()) throw ConfigError("--rates is empty");
    return out;
}

int cmd_sweep(const RunConfig& c) {
    const auto seeds = parse_seeds(c.seeds);
    const auto sizes = parse_sizes(c.sizes);
    const auto rates = parse_rates(c.rates);
    const Variant variant = parse_variant(c.variant);
    for (auto [r, cc] : sizes) {
        Lattice{r, cc, variant == Variant::Dense}.validate(variant);
        if (r * cc > c.qubit_cap) throw CapacityError("size " + std::to_string(r) + "x" + std::to_string(cc) + " exceeds the qubit cap");
    }
    for (double r : rates) NoiseModel{r * c.r1_ratio, r, r, r}.validate();

    std::ostringstream csv;
    csv << provenance_line(c) << "\n";
    csv << "seed,rows,cols,depth,r,r1,r2,r_init,r_mes,m,delta_h,stderr,predicted\n";
    struct Acc {
        double sum = 0, sum2 = 0, pred = 0;
        std::size_t count = 0;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> acc;  // (size index, rate index)
    NoisySampleOptions opt;
    opt.shots_per_trajectory = c.shots;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const Lattice lat{sizes[si].first, sizes[si].second, variant == Variant::Dense};
        for (std::uint64_t seed : seeds) {
            const Circuit circuit = generate_circuit(lat, c.depth, seed, variant);
            const ProbVector p = probabilities(simulate(circuit, {}, c.qubit_cap));
            const GateCensus census = count_gates(circuit);
            for (std::size_t ri = 0; ri < rates.size(); ++ri) {
                const double r = rates[ri];
                const NoiseModel noise{r * c.r1_ratio, r, r, r};
                const Sample s = noisy_sample(circuit, noise, c.m, seed, opt);
                const XebReport rep = estimate_alpha(s, p);
                const double pred = predicted_fidelity(census, noise, circuit.num_qubits());
                csv << seed << "," << lat.rows << "," << lat.cols << "," << c.depth << "," << fmt(r) << ","
                    << fmt(noise.r1) << "," << fmt(noise.r2) << "," << fmt(noise.r_init) << ","
                    << fmt(noise.r_mes) << "," << c.m << "," << fmt(rep.alpha) << "," << fmt(rep.stderr_)
                    << "," << fmt(pred) << "\n";
                Acc& a = acc[{si, ri}];
                a.sum += rep.alpha;
                a.sum2 += rep.alpha * rep.alpha;
                a.pred += pred;
                ++a.count;
            }
        }
    }
    emit(c.out, csv.str());

    ojson doc = provenance(c);
    ojson rows = ojson::array();
    for (const auto& [key, a] : acc) {
        const double mean = a.sum / a.count;
        const double var = a.count > 1 ? (a.sum2 - a.count * mean * mean) / (a.count - 1) : 0.0;
        rows.push_back({{"rows", sizes[key.first].first},
                        {"cols", sizes[key.first].second},
                        {"r", rates[key.second]},
                        {"seeds", a.count},
                        {"delta_h_mean", mean},
                        {"delta_h_std", std::sqrt(std::max(var, 0.0))},
                        {"predicted_mean", a.pred / a.count}});
    }
    doc["summary"] = std::move(rows);
    // the CSV owns stdout when --out is absent
    (c.out.empty() ? std::cerr : std::cout) << doc.dump(2) << "\n";
    return 0;
}

// --- ising ------------------------------------------------------------------

std::uint64_t output_bits(const std::string& x, unsigned n) {
    if (x.empty()) return 0;
    return parse_bitstring(x, n);
}

int cmd_ising(const RunConfig& c) {
    const Circuit circuit = load_circuit(c);
    const unsigned n = circuit.num_qubits();
    const std::uint64_t x = output_bits(c.x, n);
    const IsingModel model = map_to_ising(circuit, x);

    if (!c.out.empty()) {
        ojson m = ojson::parse(ising_to_json(model));
        m["provenance"] = provenance(c);
        emit(c.out, m.dump(2) + "\n");
    }

    ojson doc = provenance(c);
    doc["n_free"] = model.n_free;
    doc["g_sparse"] = model.g_sparse;
    doc["couplings"] = model.couplings.size();
    if (c.out.empty()) doc["model"] = ojson::parse(ising_to_json(model));
    std::ostringstream csv;
    bool verified = true;

    if (c.verify) {
        if (n > 16) throw CapacityError("--verify enumerates all 2^n outputs; n must be at most 16");
        const StateVector psi = simulate(circuit, {}, c.qubit_cap);
        const std::uint64_t N = std::uint64_t{1} << n;
        std::vector<std::complex<double>> ps(N);
        std::complex<double> ratio{0.0, 0.0};
        for (std::uint64_t y = 0; y < N; ++y) {
            ps[y] = path_sum_amplitude(map_to_ising(circuit, y));
            if (ratio == std::complex<double>{} && std::abs(psi.amplitude(y)) > 1e-3)
                ratio = ps[y] / psi.amplitude(y);
        }
        double max_err = 0.0;
        for (std::uint64_t y = 0; y < N; ++y) max_err = std::max(max_err, std::abs(ps[y] - ratio * psi.amplitude(y)));
        const bool unit = std::abs(std::abs(ratio) - 1.0) <= 1e-9;
        verified = unit && max_err <= 1e-9;
        doc["verify"] = {{"outputs", N},
                         {"global_phase", {ratio.real(), ratio.imag()}},
                         {"max_err", max_err},
                         {"passed", verified}};
        std::cerr << (verified ? "global phase consistent" : "global phase INCONSISTENT") << ", max err "
                  << max_err << "\n";
    }

    if (c.treewidth) {
        // widths of the circuit's prefixes by depth
        ojson widths = ojson::array();
        csv << "depth,treewidth_upper_bound,n_free\n";
        for (std::size_t d = 0; d <= circuit.depth(); ++d) {
            Circuit prefix = circuit;
            prefix.cycles.resize(d + 1);
            const IsingModel pm = map_to_ising(prefix, x);
            const unsigned w = treewidth_upper_bound(pm);
            widths.push_back({{"depth", d}, {"width", w}, {"n_free", pm.n_free}});
            csv << d << "," << w << "," << pm.n_free << "\n";
        }
        doc["treewidth"] = {{"width", treewidth_upper_bound(model)}, {"by_depth", std::move(widths)}};
    }

    if (c.stats) {
        const CouplingStatistics st = coupling_statistics(circuit.lattice, c.depth, c.p_cz, c.models, c.seed);
        ojson pr = ojson::array();
        csv << "r,empirical,sigma,theory\n";
        for (std::size_t r = 0; r < st.counts.size(); ++r) {
            pr.push_back({{"r", r},
                          {"empirical", st.empirical(r)},
                          {"sigma", st.sigma(r)},
                          {"theory", coupling_probability(r, c.p_cz)}});
            csv << r << "," << fmt(st.empirical(r)) << "," << fmt(st.sigma(r)) << ","
                << fmt(coupling_probability(r, c.p_cz)) << "\n";
        }
        ojson lk = ojson::array();
        csv << "k,mean_k_minus_l,var_k_minus_l,k_plus_l_over_3\n";
        for (unsigned k = 1; k < st.lk.size(); ++k) {
            const double target = (k + st.mean_l(k)) / 3;
            lk.push_back({{"k", k},
                          {"mean_k_minus_l", st.mean_k_minus_l(k)},
                          {"var_k_minus_l", st.var_k_minus_l(k)},
                          {"k_plus_l_over_3", target}});
            csv << k << "," << fmt(st.mean_k_minus_l(k)) << "," << fmt(st.var_k_minus_l(k)) << ","
                << fmt(target) << "\n";
        }
        doc["stats"] = {{"p_cz", c.p_cz}, {"models", c.models}, {"segments", st.segments},
                        {"P", std::move(pr)}, {"lk", std::move(lk)}};
    }

    if (c.bayes > 0) {
        Stream rng(c.seed, "bayes");
        const PhaseHistogram h = phase_histogram(model, c.bayes, rng);
        ojson counts = ojson::array();
        for (auto v : h.counts) counts.push_back(v);
        const auto rho = rho_bar(h);
        doc["bayes"] = {{"q", h.q}, {"counts", std::move(counts)}, {"rho_bar", rho}, {"alpha", bayesian_alpha(h, rho)}};
    }

    std::cout << doc.dump(2) << "\n";
    if (!c.csv.empty() && !csv.str().empty()) emit(c.csv, provenance_line(c) + "\n" + csv.str());
    return verified ? 0 : kExitVerify;
}

// --- amplitude --------------------------------------------------------------

int cmd_amplitude(const RunConfig& c) {
    if (c.xs.empty()) throw ConfigError("amplitude needs at least one --x <bitstring>");
    ojson doc = provenance(c);
    ojson amps = ojson::array();
    if (!c.state.empty()) {
        std::ifstream in(c.state, std::ios::binary);
        if (!in) throw ConfigError("cannot open '" + c.state + "'");
        StateVector s = [&] {
            try {
                return load_state(in, c.qubit_cap);
            } catch (const ParseError& e) {
                throw ConfigError(c.state + ": " + e.what());
            }
        }();
        for (const auto& xs : c.xs) {
            const auto a = s.amplitude(parse_bitstring(xs, s.num_qubits()));
            amps.push_back({{"x", xs}, {"re", a.real()}, {"im", a.imag()}, {"p", std::norm(a)}});
        }
    } else {
        const Circuit circuit = load_circuit(c);
        std::optional<StateVector> psi;
        if (!c.path_sum) psi = simulate(circuit, {}, c.qubit_cap);
        for (const auto& xs : c.xs) {
            const std::uint64_t x = parse_bitstring(xs, circuit.num_qubits());
            const auto a = c.path_sum ? path_sum_amplitude(map_to_ising(circuit, x)) : psi->amplitude(x);
            amps.push_back({{"x", xs}, {"re", a.real()}, {"im", a.imag()}, {"p", std::norm(a)}});
        }
        doc["method"] = c.path_sum ? "path_sum" : "state_vector";
    }
    doc["amplitudes"] = std::move(amps);
    emit(c.out, doc.dump(2) + "\n");
    return 0;
}

void add_common(CLI::App* app, RunConfig& c) {
    app->add_option("--rows", c.rows, "Lattice rows")->capture_default_str();
    app->add_option("--cols", c.cols, "Lattice columns")->capture_default_str();
    app->add_option("--depth", c.depth, "Cycles after the Hadamard cycle (layers for dense/stat)")
        ->capture_default_str();
    app->add_option("--seed", c.seed, "Circuit seed (also keys noise and sampling streams)")->capture_default_str();
    app->add_option("--variant", c.variant, "sec4, dense or stat")->capture_default_str();
    app->add_option("--circuit", c.circuit_file, "Read the circuit from a JSON file instead of generating it");
    app->add_option("--out", c.out, "Output file (default stdout)");
    app->add_option("--threads", c.threads, "Worker threads (default XEB_THREADS or all cores)");
    app->add_option("--qubit-cap", c.qubit_cap, "Largest state vector to allocate")->capture_default_str();
}

void add_noise(CLI::App* app, RunConfig& c) {
    app->add_option("--r1", c.noise.r1, "Pauli rate after single-qubit gates")->capture_default_str();
    app->add_option("--r2", c.noise.r2, "Two-qubit Pauli rate after CZ")->capture_default_str();
    app->add_option("--r-init", c.noise.r_init, "Initial bit-flip rate")->capture_default_str();
    app->add_option("--r-mes", c.noise.r_mes, "Measurement bit-flip rate")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random circuit sampling and cross-entropy benchmarking"};
    app.set_version_flag("--version", std::string("xeb ") + XEB_VERSION);
    app.require_subcommand(1);
    RunConfig c;

    auto* gen = app.add_subcommand("generate", "Generate a circuit and print its gate census");
    add_common(gen, c);

    auto* sim = app.add_subcommand("simulate", "Simulate and report per-cycle entropy and IPR");
    add_common(sim, c);
    sim->add_option("--csv", c.csv, "Also write the per-cycle trace as CSV");
    sim->add_option("--dump-state", c.dump_state, "Write the final state vector (binary)");

    auto* smp = app.add_subcommand("sample", "Draw bitstrings from the ideal or noisy circuit");
    add_common(smp, c);
    add_noise(smp, c);
    smp->add_option("-m", c.m, "Number of bitstrings")->capture_default_str();
    smp->add_option("--shots-per-trajectory", c.shots, "Bitstrings per noise trajectory")->capture_default_str();

    auto* xb = app.add_subcommand("xeb", "Score a sample file against the circuit");
    add_common(xb, c);
    add_noise(xb, c);
    xb->add_option("--samples", c.samples, "Sample file from `sample`")->required();

    auto* sw = app.add_subcommand("sweep", "Cross entropy difference over seeds, sizes and noise rates (CSV)");
    add_common(sw, c);
    sw->add_option("--seeds", c.seeds, "Seed list or range, e.g. 0:9 or 1,4,7")->capture_default_str();
    sw->add_option("--sizes", c.sizes, "Lattice sizes, e.g. 4x4,5x4")->capture_default_str();
    sw->add_option("--rates", c.rates, "Rates r: r2 = r_init = r_mes = r, r1 = r1-ratio * r")->capture_default_str();
    sw->add_option("--r1-ratio", c.r1_ratio, "r1 / r")->capture_default_str();
    sw->add_option("-m", c.m, "Noisy samples per cell")->capture_default_str();
    sw->add_option("--shots-per-trajectory", c.shots, "Bitstrings per noise trajectory")->capture_default_str();

    auto* is = app.add_subcommand("ising", "Map the circuit to an Ising model");
    add_common(is, c);
    is->add_option("--x", c.x, "Output bitstring, qubit 0 leftmost (default all zeros)");
    is->add_flag("--verify", c.verify, "Check path sums against the simulator for every output");
    is->add_flag("--treewidth", c.treewidth, "Greedy treewidth bound for each depth prefix");
    is->add_flag("--stats", c.stats, "Lateral coupling statistics over random layered models");
    is->add_option("--bayes", c.bayes, "Sample Q Feynman paths and report the Bayesian fidelity");
    is->add_option("--p-cz", c.p_cz, "CZ probability per edge for --stats")->capture_default_str();
    is->add_option("--models", c.models, "Number of models for --stats")->capture_default_str();
    is->add_option("--csv", c.csv, "Write treewidth and statistics tables as CSV");

    auto* amp = app.add_subcommand("amplitude", "Amplitudes <x|psi> from a dumped state or the circuit");
    add_common(amp, c);
    amp->add_option("--state", c.state, "State file from `simulate --dump-state`");
    amp->add_option("--x", c.xs, "Output bitstring(s)")->required();
    amp->add_flag("--path-sum", c.path_sum, "Evaluate by the Ising path sum instead of simulation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        c.command = app.get_subcommands().front()->get_name();
        if (c.threads > 0) set_threads(c.threads);
        validate(c);
        if (c.command == "generate") return cmd_generate(c);
        if (c.command == "simulate") return cmd_simulate(c);
        if (c.command == "sample") return cmd_sample(c);
        if (c.command == "xeb") return cmd_xeb(c);
        if (c.command == "sweep") return cmd_sweep(c);
        if (c.command == "ising") return cmd_ising(c);
        if (c.command == "amplitude") return cmd_amplitude(c);
    } catch (const CapacityError& e) {
        std::cerr << "xeb: capacity: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const VerificationError& e) {
        std::cerr << "xeb: verification failed: " << e.what() << "\n";
        return kExitVerify;
    } catch (const ConfigError& e) {
        std::cerr << "xeb: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "xeb: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
