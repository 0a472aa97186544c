#pragma once

#include <cstdint>

#include "xeb/kernels.hpp"

namespace xeb::kernels {

/// Inserts a zero bit at position q, shifting the higher bits up.
inline std::uint64_t insert_zero(std::uint64_t p, unsigned q) noexcept {
    const std::uint64_t low = p & ((std::uint64_t{1} << q) - 1);
    return ((p >> q) << (q + 1)) | low;
}

extern const KernelTable kScalarTable;

#if defined(XEB_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace xeb::kernels
