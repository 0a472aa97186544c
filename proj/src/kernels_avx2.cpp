// AVX2 + FMA kernels. A 256-bit register holds two complex doubles. For
// q >= 1 consecutive work items map to adjacent amplitudes, so each register
// covers two items; for q == 0 the pair itself is one register.
//
// This file is compiled with -mavx2 -mfma and only reached after a runtime
// CPU check.

#include <immintrin.h>

#include <algorithm>

#include "kernels_internal.hpp"

namespace xeb::kernels {

namespace {

inline double* dp(cplx* a, std::uint64_t i) { return reinterpret_cast<double*>(a + i); }

/// v * c for a complex scalar c broadcast as (re, im).
inline __m256d cmul(__m256d v, __m256d c_re, __m256d c_im) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(v, c_re, _mm256_mul_pd(swapped, c_im));
}

inline __m128d cmul128(__m128d v, __m128d c_re, __m128d c_im) {
    const __m128d swapped = _mm_permute_pd(v, 0b01);
    return _mm_fmaddsub_pd(v, c_re, _mm_mul_pd(swapped, c_im));
}

struct Bcast {
    __m256d re, im;
    explicit Bcast(cplx c) : re(_mm256_set1_pd(c.real())), im(_mm256_set1_pd(c.imag())) {}
    /// Lane-wise: low complex lane gets lo, high lane gets hi.
    Bcast(cplx lo, cplx hi)
        : re(_mm256_setr_pd(lo.real(), lo.real(), hi.real(), hi.real())),
          im(_mm256_setr_pd(lo.imag(), lo.imag(), hi.imag(), hi.imag())) {}
};

// Items [begin, end) split into runs whose amplitudes are contiguous: within
// one run of 2^q items the inserted zero bit never changes. f(i0, len)
// receives the first low index and the run length.
template <typename F>
inline void for_runs(unsigned q, std::uint64_t begin, std::uint64_t end, F&& f) {
    const std::uint64_t mask = (std::uint64_t{1} << q) - 1;
    for (std::uint64_t p = begin; p < end;) {
        const std::uint64_t stop = std::min(end, (p | mask) + 1);
        f(insert_zero(p, q), stop - p);
        p = stop;
    }
}

void matrix(cplx* a, unsigned q, const Mat2& m, std::uint64_t begin, std::uint64_t end) {
    if (q == 0) {
        const Bcast diag(m.m00, m.m11), off(m.m01, m.m10);
        for (std::uint64_t p = begin; p < end; ++p) {
            double* base = dp(a, 2 * p);
            const __m256d v = _mm256_loadu_pd(base);
            const __m256d sw = _mm256_permute2f128_pd(v, v, 0x01);
            const __m256d r = _mm256_add_pd(cmul(v, diag.re, diag.im), cmul(sw, off.re, off.im));
            _mm256_storeu_pd(base, r);
        }
        return;
    }
    const std::uint64_t bit = std::uint64_t{1} << q;
    const Bcast c00(m.m00), c01(m.m01), c10(m.m10), c11(m.m11);
    for_runs(q, begin, end, [&](std::uint64_t i0, std::uint64_t len) {
        double* lo = dp(a, i0);
        double* hi = dp(a, i0 | bit);
        std::uint64_t j = 0;
        for (; j + 1 < len; j += 2) {
            const __m256d x = _mm256_loadu_pd(lo + 2 * j);
            const __m256d y = _mm256_loadu_pd(hi + 2 * j);
            const __m256d nx = _mm256_add_pd(cmul(x, c00.re, c00.im), cmul(y, c01.re, c01.im));
            const __m256d ny = _mm256_add_pd(cmul(x, c10.re, c10.im), cmul(y, c11.re, c11.im));
            _mm256_storeu_pd(lo + 2 * j, nx);
            _mm256_storeu_pd(hi + 2 * j, ny);
        }
        if (j < len) {
            const cplx a0 = a[i0 + j], a1 = a[(i0 | bit) + j];
            a[i0 + j] = m.m00 * a0 + m.m01 * a1;
            a[(i0 | bit) + j] = m.m10 * a0 + m.m11 * a1;
        }
    });
}

void real_matrix(cplx* a, unsigned q, const RealMat2& m, std::uint64_t begin,
                 std::uint64_t end) {
    if (q == 0) {
        const __m256d diag = _mm256_setr_pd(m.m00, m.m00, m.m11, m.m11);
        const __m256d off = _mm256_setr_pd(m.m01, m.m01, m.m10, m.m10);
        for (std::uint64_t p = begin; p < end; ++p) {
            double* base = dp(a, 2 * p);
            const __m256d v = _mm256_loadu_pd(base);
            const __m256d sw = _mm256_permute2f128_pd(v, v, 0x01);
            _mm256_storeu_pd(base, _mm256_fmadd_pd(v, diag, _mm256_mul_pd(sw, off)));
        }
        return;
    }
    const std::uint64_t bit = std::uint64_t{1} << q;
    const __m256d m00 = _mm256_set1_pd(m.m00), m01 = _mm256_set1_pd(m.m01);
    const __m256d m10 = _mm256_set1_pd(m.m10), m11 = _mm256_set1_pd(m.m11);
    for_runs(q, begin, end, [&](std::uint64_t i0, std::uint64_t len) {
        double* lo = dp(a, i0);
        double* hi = dp(a, i0 | bit);
        std::uint64_t j = 0;
        for (; j + 1 < len; j += 2) {
            const __m256d x = _mm256_loadu_pd(lo + 2 * j);
            const __m256d y = _mm256_loadu_pd(hi + 2 * j);
            _mm256_storeu_pd(lo + 2 * j, _mm256_fmadd_pd(x, m00, _mm256_mul_pd(y, m01)));
            _mm256_storeu_pd(hi + 2 * j, _mm256_fmadd_pd(x, m10, _mm256_mul_pd(y, m11)));
        }
        if (j < len) {
            const cplx a0 = a[i0 + j], a1 = a[(i0 | bit) + j];
            a[i0 + j] = m.m00 * a0 + m.m01 * a1;
            a[(i0 | bit) + j] = m.m10 * a0 + m.m11 * a1;
        }
    });
}

void phase(cplx* a, unsigned q, cplx ph, std::uint64_t begin, std::uint64_t end) {
    if (q == 0) {
        const __m128d re = _mm_set1_pd(ph.real()), im = _mm_set1_pd(ph.imag());
        for (std::uint64_t p = begin; p < end; ++p) {
            double* x = dp(a, 2 * p + 1);
            _mm_storeu_pd(x, cmul128(_mm_loadu_pd(x), re, im));
        }
        return;
    }
    const std::uint64_t bit = std::uint64_t{1} << q;
    const Bcast c(ph);
    for_runs(q, begin, end, [&](std::uint64_t i0, std::uint64_t len) {
        double* x = dp(a, i0 | bit);
        std::uint64_t j = 0;
        for (; j + 1 < len; j += 2)
            _mm256_storeu_pd(x + 2 * j, cmul(_mm256_loadu_pd(x + 2 * j), c.re, c.im));
        if (j < len) a[(i0 | bit) + j] *= ph;
    });
}

void cz(cplx* a, unsigned q_lo, unsigned q_hi, std::uint64_t begin, std::uint64_t end) {
    const std::uint64_t both = (std::uint64_t{1} << q_lo) | (std::uint64_t{1} << q_hi);
    if (q_lo == 0) {
        const __m128d sign = _mm_set1_pd(-0.0);
        for (std::uint64_t p = begin; p < end; ++p) {
            double* x = dp(a, insert_zero(insert_zero(p, q_lo), q_hi) | both);
            _mm_storeu_pd(x, _mm_xor_pd(_mm_loadu_pd(x), sign));
        }
        return;
    }
    const __m256d sign = _mm256_set1_pd(-0.0);
    // Runs of 2^q_lo items stay contiguous through both zero insertions.
    const std::uint64_t mask = (std::uint64_t{1} << q_lo) - 1;
    for (std::uint64_t p = begin; p < end;) {
        const std::uint64_t stop = std::min(end, (p | mask) + 1);
        const std::uint64_t i = insert_zero(insert_zero(p, q_lo), q_hi) | both;
        double* x = dp(a, i);
        const std::uint64_t len = stop - p;
        std::uint64_t j = 0;
        for (; j + 1 < len; j += 2)
            _mm256_storeu_pd(x + 2 * j, _mm256_xor_pd(_mm256_loadu_pd(x + 2 * j), sign));
        if (j < len) a[i + j] = -a[i + j];
        p = stop;
    }
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, "avx2", &matrix, &real_matrix, &phase, &cz};

}  // namespace xeb::kernels
