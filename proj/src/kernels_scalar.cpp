// Reference kernels. Plain loops over amplitude pairs, one pair per item.

#include "kernels_internal.hpp"

namespace xeb::kernels {

namespace {

void matrix(cplx* a, unsigned q, const Mat2& m, std::uint64_t begin, std::uint64_t end) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t p = begin; p < end; ++p) {
        const std::uint64_t i0 = insert_zero(p, q);
        const cplx a0 = a[i0], a1 = a[i0 | bit];
        a[i0] = m.m00 * a0 + m.m01 * a1;
        a[i0 | bit] = m.m10 * a0 + m.m11 * a1;
    }
}

void real_matrix(cplx* a, unsigned q, const RealMat2& m, std::uint64_t begin,
                 std::uint64_t end) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t p = begin; p < end; ++p) {
        const std::uint64_t i0 = insert_zero(p, q);
        const cplx a0 = a[i0], a1 = a[i0 | bit];
        a[i0] = m.m00 * a0 + m.m01 * a1;
        a[i0 | bit] = m.m10 * a0 + m.m11 * a1;
    }
}

void phase(cplx* a, unsigned q, cplx ph, std::uint64_t begin, std::uint64_t end) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t p = begin; p < end; ++p) {
        const std::uint64_t i1 = insert_zero(p, q) | bit;
        a[i1] *= ph;
    }
}

void cz(cplx* a, unsigned q_lo, unsigned q_hi, std::uint64_t begin, std::uint64_t end) {
    const std::uint64_t both = (std::uint64_t{1} << q_lo) | (std::uint64_t{1} << q_hi);
    for (std::uint64_t p = begin; p < end; ++p) {
        const std::uint64_t i = insert_zero(insert_zero(p, q_lo), q_hi) | both;
        a[i] = -a[i];
    }
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar, "scalar", &matrix, &real_matrix, &phase, &cz};

}  // namespace xeb::kernels
