#pragma once

// Amplitude-update kernels. Every kernel works on a contiguous amplitude
// array `a` and a half-open range of work items so callers can split the
// work across threads or cache blocks:
//
//   single-qubit kernels: item p is the amplitude pair (i0, i0 | 1 << q) with
//     i0 = p with a zero bit inserted at position q;
//   cz kernel: item p is the quadruple base with zero bits inserted at q_lo
//     and q_hi, and only base | bit(q_lo) | bit(q_hi) is touched.
//
// Ranges passed by the simulator are multiples of kKernelGrain so vector
// variants never split a SIMD pair differently across partitions.

#include <complex>
#include <cstdint>
#include <string_view>

namespace xeb {

using cplx = std::complex<double>;

struct Mat2 {
    cplx m00, m01, m10, m11;
};

struct RealMat2 {
    double m00, m01, m10, m11;
};

inline constexpr std::uint64_t kKernelGrain = 2;

enum class Isa : std::uint8_t { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    std::string_view name;
    void (*matrix)(cplx* a, unsigned q, const Mat2& m, std::uint64_t begin, std::uint64_t end);
    void (*real_matrix)(cplx* a, unsigned q, const RealMat2& m, std::uint64_t begin,
                        std::uint64_t end);
    /// Multiplies the |1> component of qubit q by `phase`; |0> is untouched.
    void (*phase)(cplx* a, unsigned q, cplx phase, std::uint64_t begin, std::uint64_t end);
    /// Negates amplitudes with both bits set; requires q_lo < q_hi.
    void (*cz)(cplx* a, unsigned q_lo, unsigned q_hi, std::uint64_t begin, std::uint64_t end);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

/// Best available table; XEB_SIMD=scalar forces the reference kernels.
const KernelTable& active_kernels() noexcept;

/// Overrides the runtime choice (tests and benchmarks). Falls back to scalar
/// when the requested ISA is unavailable; returns the table in effect.
const KernelTable& select_kernels(Isa isa) noexcept;

}  // namespace xeb
