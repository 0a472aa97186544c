#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace xeb {

/// Worker thread count: set_threads() override, else XEB_THREADS, else the
/// number of available cores.
int thread_count();
void set_threads(int threads);  // <= 0 restores the environment default

/// Sum in fixed blocks of kSumBlock elements, each block summed sequentially,
/// then the block partials combined with Neumaier compensation. The result
/// does not depend on the thread count.
inline constexpr std::size_t kSumBlock = 4096;
double deterministic_sum(std::span<const double> values);

/// Same, over f(i) for i in [0, count).
template <typename F>
double deterministic_sum(std::size_t count, F&& f);

namespace detail {
double neumaier(std::span<const double> partials);
}

template <typename F>
double deterministic_sum(std::size_t count, F&& f) {
    const std::size_t blocks = (count + kSumBlock - 1) / kSumBlock;
    // Stack buffer for the common small case.
    constexpr std::size_t kInline = 64;
    double inline_buf[kInline];
    double* partial = blocks <= kInline ? inline_buf : new double[blocks];
    const auto nblocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (nblocks > 4)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t hi = lo + kSumBlock < count ? lo + kSumBlock : count;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[b] = s;
    }
    const double total = detail::neumaier({partial, blocks});
    if (partial != inline_buf) delete[] partial;
    return total;
}

}  // namespace xeb
