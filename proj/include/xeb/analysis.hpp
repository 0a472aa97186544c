#pragma once

// Cross-entropy benchmarking statistics and Porter-Thomas diagnostics.
// Natural logarithms throughout.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xeb/circuit.hpp"
#include "xeb/noise.hpp"
#include "xeb/statevector.hpp"

namespace xeb {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// log p for p below this is replaced by log(kClampFloor) and counted.
inline constexpr double kClampFloor = 1e-300;

double entropy(std::span<const double> p);
inline double entropy(const ProbVector& p) { return entropy(p.p); }

/// n ln2 - 1 + gamma: entropy of a Porter-Thomas distribution.
double pt_entropy(unsigned n);
/// n ln2 + gamma: cross entropy of a uniform sampler against Porter-Thomas.
double h0(unsigned n);

struct Clamped {
    double value = 0.0;
    std::uint64_t clamped = 0;
};

/// -sum p_a log p_u.
Clamped cross_entropy(std::span<const double> p_a, std::span<const double> p_u);
/// h0(n) - cross_entropy(p_a, p_u), N = 2^n = p_u.size().
Clamped cross_entropy_difference(std::span<const double> p_a, std::span<const double> p_u);

struct XebReport {
    double alpha = 0.0;
    double h0 = 0.0;
    double stderr_ = 0.0;  // of alpha
    std::uint64_t m = 0;
    unsigned n = 0;
    std::uint64_t clamped = 0;
};

/// alpha = h0(n) - mean log(1/p_u(x)). Throws ConfigError on an empty sample
/// or a size mismatch.
XebReport estimate_alpha(const Sample& sample, const ProbVector& p_u);

/// The m -> infinity limit of estimate_alpha: samples replaced by weights.
XebReport estimate_alpha_weighted(std::span<const double> weights, const ProbVector& p_u);

/// exp(-r1 g1 - r2 g2 - r_init n - r_mes n), g1 including the initial layer.
double predicted_fidelity(const GateCensus& census, const NoiseModel& noise, unsigned n);

/// Density of z = ln(N p) under the depolarized Porter-Thomas ansatz.
double pt_pdf(double z, double alpha);
double pt_cdf(double z, double alpha);

/// Maximum-likelihood alpha in [0, 1] (absolute tolerance 1e-6 or better).
/// Throws ConfigError on empty input.
double fit_alpha(std::span<const double> zs);
/// d/d alpha of the log-likelihood; decreasing in alpha.
double fit_alpha_score(std::span<const double> zs, double alpha);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test of zs against pt_cdf(., alpha).
KsResult ks_test(std::span<const double> zs, double alpha);
/// P(sqrt(m) D > lambda) asymptotically: 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

/// N^(k-1) sum p^k. Throws ConfigError for k < 2.
double normalized_ipr(std::span<const double> p, unsigned k);

struct PtStats {
    std::size_t cycle = 0;
    double entropy = 0.0;
    std::array<double, 9> ipr{};  // normalized IPR for k = 2..10

    double ipr_k(unsigned k) const { return ipr.at(k - 2); }
};

PtStats pt_stats(const ProbVector& p, std::size_t cycle);

/// Half-width of the convergence band: 4 * 0.75 * 2^(-n/2).
double pt_entropy_band(unsigned n);

/// Smallest t with |H_s - pt_entropy(n)| within the band for every s >= t.
std::optional<std::size_t> pt_convergence_depth(std::span<const double> entropy_trace,
                                                unsigned n);

inline constexpr std::size_t kCorrBins = 50;
inline constexpr double kCorrLogMin = -4.0;  // log10(N p)
inline constexpr double kCorrLogMax = 2.0;

struct ErrorCorrelation {
    double pearson = 0.0;
    /// hist[i][j]: ideal N p in bin i, erroneous N p in bin j (log10 bins
    /// over [1e-4, 1e2]); pairs outside the range are counted separately.
    std::vector<std::array<std::uint64_t, kCorrBins>> hist;
    std::uint64_t outside = 0;
};

double pearson(std::span<const double> a, std::span<const double> b);
ErrorCorrelation error_correlation(std::span<const double> p_ideal, std::span<const double> p_err);

/// sum log p_u(a) - sum log p_u(b). Throws ConfigError unless |a| = |b|.
Clamped log_likelihood_gap(const ProbVector& p_u, const Sample& a, const Sample& b);

}  // namespace xeb
