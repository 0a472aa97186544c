#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "xeb/error.hpp"
#include "xeb/noise.hpp"

using namespace xeb;

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Pearson chi-square statistic of counts against expected probabilities.
double chi_square(const std::vector<double>& counts, const std::vector<double>& p, double m) {
    double chi = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            REQUIRE(counts[i] == 0.0);
            continue;
        }
        const double e = m * p[i];
        chi += (counts[i] - e) * (counts[i] - e) / e;
    }
    return chi;
}

std::vector<double> histogram(const Sample& s) {
    std::vector<double> h(std::size_t{1} << s.n, 0.0);
    for (auto x : s.bitstrings) h[x] += 1.0;
    return h;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("noise model json round trip and validation") {
    const NoiseModel m{0.001, 0.01, 0.02, 0.03};
    CHECK(parse_noise(to_json(m)) == m);
    CHECK(to_json(m) == R"({"r1":0.001,"r2":0.01,"r_init":0.02,"r_mes":0.03})");
    CHECK_THROWS_AS(parse_noise(R"({"r1":0.1,"r2":0.1,"r_init":0.1})"), ParseError);
    CHECK_THROWS_AS(parse_noise(R"({"r1":1.5,"r2":0.1,"r_init":0.1,"r_mes":0})"), ParseError);
    CHECK_THROWS_AS(parse_noise("{\n\"r1\": }"), ParseError);
    CHECK_THROWS_AS((NoiseModel{-0.1, 0, 0, 0}.validate()), ConfigError);
}

TEST_CASE("zero rates give the ideal trajectory") {
    const auto c = generate_circuit({2, 3, false}, 10, 1, Variant::Sec4);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto t = trajectory_at(c, {}, 5, i);
        CHECK(t.errors.empty());
        CHECK(t.init_mask == 0);
        CHECK(t.mes_mask == 0);
        CHECK(derived_circuit(c, t) == c);
    }
}

TEST_CASE("r2 = 1 puts a Pauli pair after every CZ") {
    const auto c = generate_circuit({3, 3, false}, 16, 2, Variant::Sec4);
    const NoiseModel noise{0.0, 1.0, 0.0, 0.0};
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto t = trajectory_at(c, noise, 1, i);
        std::size_t czs = 0;
        for (std::size_t cyc = 0; cyc < c.cycles.size(); ++cyc)
            for (const Gate& g : c.cycles[cyc]) {
                if (g.kind != GateKind::CZ) continue;
                ++czs;
                std::size_t hits = 0;
                for (const auto& e : t.errors) hits += e.cycle == cyc && g.touches(e.qubit);
                CHECK((hits == 1 || hits == 2));
            }
        for (const auto& e : t.errors) CHECK(c.cycles[e.cycle].size() > 0);
        CHECK(czs == count_gates(c).g2);
    }
}

TEST_CASE("two-qubit Pauli pairs are uniform over the 15 products") {
    Circuit c;
    c.lattice = {1, 2, false};
    c.cycles = {{Gate::cz(0, 1)}};
    const NoiseModel noise{0.0, 1.0, 0.0, 0.0};
    std::map<std::pair<int, int>, double> counts;
    const int m = 30000;
    for (int i = 0; i < m; ++i) {
        const auto t = trajectory_at(c, noise, 9, static_cast<std::uint64_t>(i));
        int a = 0, b = 0;
        for (const auto& e : t.errors) (e.qubit == 0 ? a : b) = 1 + static_cast<int>(e.kind) - static_cast<int>(GateKind::X);
        ++counts[{a, b}];
    }
    CHECK(counts.size() == 15);
    CHECK(counts.count({0, 0}) == 0);
    std::vector<double> h, p(15, 1.0 / 15);
    for (auto& [k, v] : counts) h.push_back(v);
    // chi-square with 14 dof; 5 sigma is about 14 + 5 * sqrt(28)
    CHECK(chi_square(h, p, m) < 14 + 5 * std::sqrt(28.0));
}

TEST_CASE("mean single-qubit error count matches r1 * g1") {
    const auto c = generate_circuit({3, 3, false}, 20, 4, Variant::Sec4);
    const double r1 = 0.01;
    const NoiseModel noise{r1, 0.0, 0.0, 0.0};
    const auto g1 = static_cast<double>(count_gates(c).g1_total);
    const int m = 10000;
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += trajectory_at(c, noise, 3, i).errors.size();
    const double sd = std::sqrt(m * g1 * r1 * (1 - r1));
    CHECK(std::abs(total - m * g1 * r1) <= 3 * sd);
}

TEST_CASE("snapshot resume matches direct trajectory simulation") {
    const auto c = generate_circuit({3, 4, false}, 24, 6, Variant::Sec4);
    const NoiseModel noise{0.01, 0.03, 0.02, 0.1};
    for (std::size_t interval : {1u, 3u, 7u, 100u}) {
        const SnapshotCache cache(c, interval, 0, {});
        for (std::uint64_t i = 0; i < 25; ++i) {
            const auto t = trajectory_at(c, noise, 8, i);
            const auto a = cache.run(t);
            const auto b = simulate_trajectory(c, t);
            auto d = simulate(derived_circuit(c, t));
            if (t.init_mask != 0) continue;
            double m = 0.0;
            for (std::uint64_t x = 0; x < a.size(); ++x) {
                m = std::max(m, std::abs(a.amplitudes()[x] - b.amplitudes()[x]));
                m = std::max(m, std::abs(d.amplitudes()[x] - b.amplitudes()[x]));
            }
            CHECK(m <= 1e-12);
        }
    }
}

TEST_CASE("init flips start from the flipped basis state") {
    Circuit c;
    c.lattice = {1, 3, false};
    c.cycles = {{Gate::single(GateKind::T, 0)}};
    Trajectory t;
    t.init_mask = 0b101;
    const auto s = simulate_trajectory(c, t);
    CHECK(std::abs(s.amplitude(5) - std::polar(1.0, M_PI / 4)) < 1e-15);
}

TEST_CASE("noiseless noisy sampling matches the ideal distribution") {
    const auto c = generate_circuit({2, 4, false}, 12, 3, Variant::Sec4);
    const auto p = probabilities(simulate(c));
    const std::size_t m = 40000;
    const auto r = noisy_sample_run(c, {}, m, 17);
    CHECK(r.trajectories == m);
    CHECK(r.simulated == 0);
    const double dof = 255;
    CHECK(chi_square(histogram(r.sample), p.p, m) < dof + 5 * std::sqrt(2 * dof));
}

TEST_CASE("measurement flips at 1/2 make a Hadamard layer uniform") {
    const auto c = generate_circuit({2, 3, false}, 0, 3, Variant::Sec4);
    const std::size_t m = 30000;
    const auto s = noisy_sample(c, {0, 0, 0, 0.5}, m, 4);
    std::vector<double> uni(64, 1.0 / 64);
    CHECK(chi_square(histogram(s), uni, m) < 63 + 5 * std::sqrt(126.0));
}

TEST_CASE("shots per trajectory") {
    const auto c = generate_circuit({2, 3, false}, 8, 3, Variant::Sec4);
    NoisySampleOptions opt;
    opt.shots_per_trajectory = 3;
    const auto r = noisy_sample_run(c, {0.01, 0.05, 0.01, 0.01}, 10, 4, opt);
    CHECK(r.sample.bitstrings.size() == 10);
    CHECK(r.trajectories == 4);
    const auto again = noisy_sample_run(c, {0.01, 0.05, 0.01, 0.01}, 10, 4, opt);
    CHECK(again.sample.bitstrings == r.sample.bitstrings);
    CHECK_THROWS_AS(noisy_sample(c, {}, 0, 1), ConfigError);
}

TEST_CASE("average noisy distribution") {
    const auto c = generate_circuit({2, 3, false}, 14, 5, Variant::Sec4);
    const auto ideal = probabilities(simulate(c));
    CHECK(max_abs_diff(average_noisy_distribution(c, {}, 1, 1).p, ideal.p) <= 1e-12);

    // Strong noise flattens N*p towards 1.
    const auto flat = average_noisy_distribution(c, {0.3, 0.3, 0.3, 0.0}, 3000, 2);
    double spread = 0.0, ideal_spread = 0.0;
    for (std::size_t x = 0; x < 64; ++x) {
        spread += std::pow(64 * flat.p[x] - 1, 2) / 64;
        ideal_spread += std::pow(64 * ideal.p[x] - 1, 2) / 64;
    }
    CHECK(std::sqrt(spread) < 0.2);
    CHECK(std::sqrt(ideal_spread) > 0.5);
    CHECK(std::accumulate(flat.p.begin(), flat.p.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("two seeds agree within Monte Carlo error") {
    const auto c = generate_circuit({2, 3, false}, 14, 5, Variant::Sec4);
    const NoiseModel noise{0.01, 0.05, 0.02, 0.02};
    const std::size_t n_traj = 10000;
    const auto a = average_noisy_distribution(c, noise, n_traj, 1);
    const auto b = average_noisy_distribution(c, noise, n_traj, 2);

    // Oracle: per-entry variance across single trajectories, then the expected
    // total-variation distance between two independent means.
    std::vector<double> mean(64, 0.0), sq(64, 0.0);
    const std::size_t probe = 2000;
    for (std::uint64_t i = 0; i < probe; ++i) {
        const auto t = trajectory_at(c, noise, 3, i);
        const auto p = probabilities(simulate_trajectory(c, t));
        for (std::uint64_t x = 0; x < 64; ++x) {
            mean[x ^ t.mes_mask] += p.p[x] / probe;
            sq[x ^ t.mes_mask] += p.p[x] * p.p[x] / probe;
        }
    }
    double expected_tv = 0.0;
    for (std::size_t x = 0; x < 64; ++x) {
        const double var = std::max(0.0, sq[x] - mean[x] * mean[x]);
        expected_tv += 0.5 * std::sqrt(2 * var / n_traj) * std::sqrt(2 / M_PI);
    }
    double tv = 0.0;
    for (std::size_t x = 0; x < 64; ++x) tv += 0.5 * std::abs(a.p[x] - b.p[x]);
    CHECK(tv <= 5 * expected_tv);
    CHECK(tv > 0.0);
}

TEST_CASE("single errors that leave the distribution unchanged") {
    const auto c = generate_circuit({3, 3, false}, 16, 7, Variant::Sec4);
    const auto ideal = probabilities(simulate(c));
    for (Qubit q = 0; q < 9; ++q) {
        const auto z_end = single_error_distribution(c, {c.cycles.size() - 1, q, Pauli::Z});
        CHECK(max_abs_diff(z_end.p, ideal.p) <= 1e-12);
        const auto x_start = single_error_distribution(c, {0, q, Pauli::X});
        CHECK(max_abs_diff(x_start.p, ideal.p) <= 1e-12);
    }
}

TEST_CASE("a mid-circuit Z decorrelates a 4x4 depth-20 circuit") {
    const auto c = generate_circuit({4, 4, false}, 20, 1, Variant::Sec4);
    const auto ideal = probabilities(simulate(c));
    const auto err = single_error_distribution(c, {10, 5, Pauli::Z});
    CHECK(pearson(ideal.p, err.p) < 0.2);
}

TEST_CASE("averaged single errors equal the mean of individual runs") {
    const auto c = generate_circuit({2, 3, false}, 10, 2, Variant::Sec4);
    const auto locs = error_locations(c, 2, 5, {Pauli::X, Pauli::Z});
    CHECK(locs.size() == 4 * 6 * 2);
    const auto avg = average_single_error_distribution(c, locs);
    std::vector<double> ref(64, 0.0);
    for (const auto& loc : locs) {
        const auto p = single_error_distribution(c, loc);
        for (std::size_t x = 0; x < 64; ++x) ref[x] += p.p[x] / locs.size();
    }
    CHECK(max_abs_diff(avg.p, ref) <= 1e-12);
}

TEST_CASE("sample files") {
    const Sample s{5, {0, 1, 0b10110, 31}};
    std::stringstream buf;
    write_samples(buf, s, 42);
    CHECK(buf.str() == "#n=5 m=4 seed=42\n00000\n10000\n01101\n11111\n");
    const auto back = read_samples(buf);
    CHECK(back.sample.n == 5);
    CHECK(back.sample.bitstrings == s.bitstrings);
    CHECK(back.seed == 42);

    std::stringstream bad_header("n=5\n00000\n");
    CHECK_THROWS_AS(read_samples(bad_header), ParseError);
    std::stringstream bad_line("#n=3 m=2 seed=1\n010\n0a0\n");
    try {
        read_samples(bad_line);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::stringstream commented("#n=3 m=2 seed=1\n# tool=xeb\n010\n#\n111\n");
    CHECK(read_samples(commented).sample.bitstrings == std::vector<std::uint64_t>{0b010, 0b111});
    std::stringstream short_file("#n=3 m=3 seed=1\n010\n");
    CHECK_THROWS_AS(read_samples(short_file), ParseError);
    CHECK(parse_bitstring("0011", 4) == 0b1100);
    CHECK(bitstring(0b1100, 4) == "0011");
}
