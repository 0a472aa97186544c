#include "xeb/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "xeb/error.hpp"
#include "xeb/parallel.hpp"

namespace xeb {

namespace {

double clamped_log(double p, std::uint64_t& clamped) {
    if (p < kClampFloor) {
        ++clamped;
        return std::log(kClampFloor);
    }
    return std::log(p);
}

unsigned qubits_of(std::size_t size) {
    if (size == 0 || (size & (size - 1)) != 0)
        throw ConfigError("distribution size must be a power of two");
    return static_cast<unsigned>(std::countr_zero(size));
}

}  // namespace

double entropy(std::span<const double> p) {
    return -deterministic_sum(p.size(), [&](std::size_t i) {
        return p[i] > 0.0 ? p[i] * std::log(p[i]) : 0.0;
    });
}

double pt_entropy(unsigned n) { return n * std::numbers::ln2 - 1.0 + kEulerGamma; }

double h0(unsigned n) { return n * std::numbers::ln2 + kEulerGamma; }

Clamped cross_entropy(std::span<const double> p_a, std::span<const double> p_u) {
    if (p_a.size() != p_u.size()) throw ConfigError("distributions differ in size");
    Clamped out;
    for (std::size_t i = 0; i < p_a.size(); ++i)
        if (p_a[i] > 0.0 && p_u[i] < kClampFloor) ++out.clamped;
    out.value = -deterministic_sum(p_a.size(), [&](std::size_t i) {
        if (p_a[i] == 0.0) return 0.0;
        return p_a[i] * std::log(std::max(p_u[i], kClampFloor));
    });
    return out;
}

Clamped cross_entropy_difference(std::span<const double> p_a, std::span<const double> p_u) {
    Clamped h = cross_entropy(p_a, p_u);
    h.value = h0(qubits_of(p_u.size())) - h.value;
    return h;
}

XebReport estimate_alpha(const Sample& sample, const ProbVector& p_u) {
    if (sample.bitstrings.empty()) throw ConfigError("cannot score an empty sample");
    if (sample.n != p_u.n) throw ConfigError("sample and distribution differ in qubit count");
    XebReport r;
    r.n = p_u.n;
    r.m = sample.bitstrings.size();
    r.h0 = h0(p_u.n);
    std::vector<double> logs(r.m);
    for (std::size_t j = 0; j < r.m; ++j) {
        const std::uint64_t x = sample.bitstrings[j];
        if (x >= p_u.size()) throw ConfigError("sampled bitstring out of range");
        logs[j] = -clamped_log(p_u.p[x], r.clamped);
    }
    const double mean = deterministic_sum(logs) / static_cast<double>(r.m);
    r.alpha = r.h0 - mean;
    if (r.m > 1) {
        const double ss =
            deterministic_sum(r.m, [&](std::size_t j) { return (logs[j] - mean) * (logs[j] - mean); });
        r.stderr_ = std::sqrt(ss / static_cast<double>(r.m - 1) / static_cast<double>(r.m));
    }
    return r;
}

XebReport estimate_alpha_weighted(std::span<const double> weights, const ProbVector& p_u) {
    const Clamped d = cross_entropy_difference(weights, p_u.p);
    XebReport r;
    r.n = p_u.n;
    r.h0 = h0(p_u.n);
    r.alpha = d.value;
    r.clamped = d.clamped;
    return r;
}

double predicted_fidelity(const GateCensus& census, const NoiseModel& noise, unsigned n) {
    return std::exp(-noise.r1 * static_cast<double>(census.g1_total) -
                    noise.r2 * static_cast<double>(census.g2) - noise.r_init * n -
                    noise.r_mes * n);
}

double pt_pdf(double z, double alpha) {
    const double u = std::exp(z);
    return std::exp(z - u) * (1.0 + alpha * (u - 1.0));
}

double pt_cdf(double z, double alpha) {
    const double u = std::exp(z);
    const double e = std::exp(-u);
    return -std::expm1(-u) - alpha * u * e;
}

double fit_alpha_score(std::span<const double> zs, double alpha) {
    return deterministic_sum(zs.size(), [&](std::size_t i) {
        const double v = std::expm1(zs[i]);
        return v / (1.0 + alpha * v);
    });
}

double fit_alpha(std::span<const double> zs) {
    if (zs.empty()) throw ConfigError("fit_alpha needs at least one value");
    // The log-likelihood sum log(1 + alpha (e^z - 1)) is concave, so its
    // derivative is decreasing and the maximiser is its root (or an endpoint).
    if (fit_alpha_score(zs, 0.0) <= 0.0) return 0.0;
    if (fit_alpha_score(zs, 1.0) >= 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (fit_alpha_score(zs, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> zs, double alpha) {
    if (zs.empty()) throw ConfigError("ks_test needs at least one value");
    std::vector<double> s(zs.begin(), zs.end());
    std::sort(s.begin(), s.end());
    const double m = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = pt_cdf(s[i], alpha);
        d = std::max({d, (static_cast<double>(i) + 1) / m - f, f - static_cast<double>(i) / m});
    }
    const double sq = std::sqrt(m);
    return {d, kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)};
}

double normalized_ipr(std::span<const double> p, unsigned k) {
    if (k < 2) throw ConfigError("IPR order must be at least 2");
    const double N = static_cast<double>(p.size());
    // mean of (N p)^k keeps the terms of order one
    return deterministic_sum(p.size(), [&](std::size_t i) { return std::pow(N * p[i], k); }) / N;
}

PtStats pt_stats(const ProbVector& p, std::size_t cycle) {
    PtStats s;
    s.cycle = cycle;
    s.entropy = entropy(p);
    for (unsigned k = 2; k <= 10; ++k) s.ipr[k - 2] = normalized_ipr(p.p, k);
    return s;
}

double pt_entropy_band(unsigned n) { return 4.0 * 0.75 * std::exp2(-0.5 * n); }

std::optional<std::size_t> pt_convergence_depth(std::span<const double> trace, unsigned n) {
    const double target = pt_entropy(n), band = pt_entropy_band(n);
    std::optional<std::size_t> t;
    for (std::size_t s = trace.size(); s-- > 0;) {
        if (std::abs(trace[s] - target) > band) break;
        t = s;
    }
    return t;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw ConfigError("pearson needs equal nonempty inputs");
    const double n = static_cast<double>(a.size());
    const double ma = deterministic_sum(a) / n, mb = deterministic_sum(b) / n;
    const double sab = deterministic_sum(a.size(), [&](std::size_t i) { return (a[i] - ma) * (b[i] - mb); });
    const double saa = deterministic_sum(a.size(), [&](std::size_t i) { return (a[i] - ma) * (a[i] - ma); });
    const double sbb = deterministic_sum(b.size(), [&](std::size_t i) { return (b[i] - mb) * (b[i] - mb); });
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

ErrorCorrelation error_correlation(std::span<const double> p_ideal, std::span<const double> p_err) {
    ErrorCorrelation out;
    out.pearson = pearson(p_ideal, p_err);
    out.hist.assign(kCorrBins, {});
    const double N = static_cast<double>(p_ideal.size());
    const double width = (kCorrLogMax - kCorrLogMin) / kCorrBins;
    auto bin = [&](double p) -> std::optional<std::size_t> {
        const double np = N * p;
        if (!(np > 0.0)) return std::nullopt;
        const double l = std::log10(np);
        if (l < kCorrLogMin || l >= kCorrLogMax) return std::nullopt;
        return std::min(kCorrBins - 1, static_cast<std::size_t>((l - kCorrLogMin) / width));
    };
    for (std::size_t x = 0; x < p_ideal.size(); ++x) {
        const auto i = bin(p_ideal[x]), j = bin(p_err[x]);
        if (i && j)
            ++out.hist[*i][*j];
        else
            ++out.outside;
    }
    return out;
}

Clamped log_likelihood_gap(const ProbVector& p_u, const Sample& a, const Sample& b) {
    if (a.bitstrings.size() != b.bitstrings.size())
        throw ConfigError("samples must have the same size");
    Clamped out;
    auto total = [&](const Sample& s) {
        std::vector<double> logs(s.bitstrings.size());
        for (std::size_t j = 0; j < logs.size(); ++j) {
            if (s.bitstrings[j] >= p_u.size()) throw ConfigError("sampled bitstring out of range");
            logs[j] = clamped_log(p_u.p[s.bitstrings[j]], out.clamped);
        }
        return deterministic_sum(logs);
    };
    out.value = total(a) - total(b);
    return out;
}

}  // namespace xeb
