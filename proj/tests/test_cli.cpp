#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xeb/analysis.hpp"
#include "xeb/ising.hpp"
#include "xeb/noise.hpp"
#include "xeb/statevector.hpp"

using namespace xeb;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run xeb_cli(const std::string& args) {
    const std::string cmd = std::string(XEB_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("xeb_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

// Drops '#' lines so files can be compared without the provenance header.
std::string body(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    bool first = true;
    while (std::getline(in, line)) {
        if (!first && !line.empty() && line[0] == '#') continue;
        first = false;
        out += line + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("generate") {
    TempDir dir;
    const auto a = xeb_cli("generate --rows 5 --cols 4 --depth 40 --seed 7 --out " + dir / "a.json");
    REQUIRE(a.code == 0);
    const auto census = nlohmann::json::parse(a.out)["census"];
    CHECK(census["g2"].get<int>() > 0);
    CHECK(census["depth"] == 40);
    REQUIRE(xeb_cli("generate --rows 5 --cols 4 --depth 40 --seed 7 --out " + dir / "b.json").code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    // the file is a loadable circuit with provenance attached
    const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
    CHECK(doc["provenance"]["version"].is_string());
    CHECK(doc["provenance"]["config"]["seed"] == 7);
    CHECK(parse_circuit(slurp(dir / "a.json")) == generate_circuit({5, 4, false}, 40, 7, Variant::Sec4));

    CHECK(xeb_cli("generate --variant dense --rows 3 --cols 3").code == 2);
    CHECK(xeb_cli("generate --variant bogus").code == 2);
    CHECK(xeb_cli("generate --rows x").code == 2);
    CHECK(xeb_cli("nonsense").code == 2);
}

TEST_CASE("simulate") {
    TempDir dir;
    const auto r = xeb_cli("simulate --rows 4 --cols 4 --depth 30 --csv " + dir / "t.csv");
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc["final_entropy"].get<double>() - pt_entropy(16)) <= pt_entropy_band(16));
    CHECK(doc["convergence_depth"].is_number());
    CHECK(doc["trace"].size() == 31);
    CHECK(doc["config"]["depth"] == 30);
    const std::string csv = slurp(dir / "t.csv");
    CHECK(csv.rfind("# {", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 33);

    const auto zero = nlohmann::json::parse(xeb_cli("simulate --rows 2 --cols 3 --depth 0").out);
    CHECK(std::abs(zero["final_entropy"].get<double>() - 6 * std::log(2.0)) <= 1e-12);

    REQUIRE(xeb_cli("simulate --rows 3 --cols 3 --depth 8 --dump-state " + dir / "s.bin --out " + dir / "s.json").code == 0);
    const auto amp = xeb_cli("amplitude --state " + dir / "s.bin --x 101000000 --x 000000001");
    REQUIRE(amp.code == 0);
    const auto a = nlohmann::json::parse(amp.out)["amplitudes"];
    const StateVector psi = simulate(generate_circuit({3, 3, false}, 8, 0, Variant::Sec4));
    const auto want = psi.amplitude(parse_bitstring("101000000", 9));
    CHECK(a[0]["re"].get<double>() == want.real());
    CHECK(a[0]["im"].get<double>() == want.imag());
    CHECK(a[1]["p"].get<double>() == std::norm(psi.amplitude(parse_bitstring("000000001", 9))));

    const auto ps = xeb_cli("amplitude --rows 3 --cols 3 --depth 8 --path-sum --x 101000000");
    REQUIRE(ps.code == 0);
    const auto pa = nlohmann::json::parse(ps.out)["amplitudes"][0];
    CHECK(std::abs(std::complex<double>(pa["re"], pa["im"]) - want) <= 1e-12);

    CHECK(xeb_cli("simulate --rows 6 --cols 6 --depth 1 --qubit-cap 20").code == 3);
    CHECK(xeb_cli("amplitude --state " + dir / "missing.bin --x 0").code == 2);
}

TEST_CASE("sample and xeb") {
    TempDir dir;
    const std::string circ = "--rows 4 --cols 4 --depth 30 --seed 3";
    REQUIRE(xeb_cli("sample " + circ + " -m 20000 --out " + dir / "ideal.txt").code == 0);
    const auto ideal = nlohmann::json::parse(xeb_cli("xeb " + circ + " --samples " + dir / "ideal.txt").out);
    const double a1 = ideal["report"]["alpha"], s1 = ideal["report"]["stderr"];
    CHECK(std::abs(a1 - 1.0) <= 4 * s1);
    CHECK(ideal["report"]["m"] == 20000);

    // uniform sampler, written directly in the sample format
    {
        std::ofstream f(dir / "uniform.txt");
        Sample u{16, {}};
        Stream rng(5, "uniform");
        for (int i = 0; i < 20000; ++i) u.bitstrings.push_back(rng.below(1u << 16));
        write_samples(f, u, 5);
    }
    const auto uni = nlohmann::json::parse(xeb_cli("xeb " + circ + " --samples " + dir / "uniform.txt").out);
    CHECK(std::abs(uni["report"]["alpha"].get<double>()) <= 4 * uni["report"]["stderr"].get<double>());

    // rerunning the same config reproduces the sample bytes
    const std::string noisy = circ + " -m 3000 --r1 0.001 --r2 0.01 --r-init 0.01 --r-mes 0.01";
    REQUIRE(xeb_cli("sample " + noisy + " --out " + dir / "n1.txt").code == 0);
    REQUIRE(xeb_cli("sample " + noisy + " --out " + dir / "n2.txt").code == 0);
    CHECK(slurp(dir / "n1.txt") == slurp(dir / "n2.txt"));
    REQUIRE(xeb_cli("sample " + noisy + " --threads 2 --out " + dir / "n3.txt").code == 0);
    CHECK(body(slurp(dir / "n1.txt")) == body(slurp(dir / "n3.txt")));

    CHECK(xeb_cli("xeb --rows 2 --cols 2 --depth 5 --samples " + dir / "ideal.txt").code == 2);
    CHECK(xeb_cli("sample " + circ + " --r1 1.5").code == 2);
    CHECK(xeb_cli("sample " + circ + " -m 0").code == 2);
}

TEST_CASE("sweep") {
    TempDir dir;
    const auto r = xeb_cli("sweep --depth 20 --sizes 2x3,3x3,3x4 --seeds 0:2 --rates 0,0.01 -m 3000 --out " +
                           dir / "sweep.csv");
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "sweep.csv");
    std::istringstream in(csv);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("seed,", 0) == 0) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    CHECK(rows.size() == 3 * 3 * 2);
    const auto summary = nlohmann::json::parse(r.out)["summary"];
    std::vector<double> noisy;
    for (const auto& s : summary) {
        if (s["r"].get<double>() == 0.0)
            CHECK(std::abs(s["delta_h_mean"].get<double>() - 1.0) <= 0.1);
        else
            noisy.push_back(s["delta_h_mean"]);
    }
    REQUIRE(noisy.size() == 3);
    CHECK(noisy[0] > noisy[1]);
    CHECK(noisy[1] > noisy[2]);
    // identical config, identical rows
    REQUIRE(xeb_cli("sweep --depth 20 --sizes 2x3,3x3,3x4 --seeds 0:2 --rates 0,0.01 -m 3000 --out " +
                    dir / "again.csv").code == 0);
    CHECK(slurp(dir / "again.csv") == csv);
    CHECK(xeb_cli("sweep --sizes 3by3").code == 2);
    CHECK(xeb_cli("sweep --seeds 5:1").code == 2);
}

TEST_CASE("ising") {
    TempDir dir;
    const auto v = xeb_cli("ising --rows 1 --cols 3 --depth 4 --verify --out " + dir / "m.json");
    CHECK(v.code == 0);
    const auto doc = nlohmann::json::parse(v.out);
    CHECK(doc["verify"]["passed"] == true);
    CHECK(doc["verify"]["max_err"].get<double>() < 1e-9);
    const auto model = nlohmann::json::parse(slurp(dir / "m.json"));
    CHECK(model["x"] == "000");
    CHECK(model.contains("provenance"));

    const auto t = xeb_cli("ising --rows 3 --cols 3 --depth 16 --treewidth --csv " + dir / "tw.csv");
    REQUIRE(t.code == 0);
    const auto widths = nlohmann::json::parse(t.out)["treewidth"]["by_depth"];
    CHECK(widths.size() == 17);
    for (std::size_t d = 1; d < widths.size(); ++d) CHECK(widths[d]["width"] >= widths[d - 1]["width"]);
    CHECK(slurp(dir / "tw.csv").find("depth,treewidth_upper_bound") != std::string::npos);

    const auto b = xeb_cli("ising --rows 2 --cols 2 --depth 8 --seed 1 --x 0110 --bayes 20000");
    REQUIRE(b.code == 0);
    const auto bayes = nlohmann::json::parse(b.out)["bayes"];
    const auto m = map_to_ising(generate_circuit({2, 2, false}, 8, 1, Variant::Sec4), parse_bitstring("0110", 4));
    Stream rng(1, "bayes");
    const auto h = phase_histogram(m, 20000, rng);
    CHECK(bayes["alpha"].get<double>() == bayesian_alpha(h));
    CHECK(bayes["q"] == 20000);

    const auto s = xeb_cli("ising --rows 3 --cols 3 --depth 40 --variant stat --stats --models 50");
    REQUIRE(s.code == 0);
    const auto st = nlohmann::json::parse(s.out)["stats"];
    CHECK(st["P"][0]["theory"].get<double>() == doctest::Approx(0.72727).epsilon(1e-4));

    CHECK(xeb_cli("ising --rows 1 --cols 3 --depth 4 --x 01").code == 2);
    CHECK(xeb_cli("ising --rows 5 --cols 4 --depth 4 --verify").code == 3);
}
