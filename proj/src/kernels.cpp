#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace xeb {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(XEB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* detect() noexcept {
    if (const char* env = std::getenv("XEB_SIMD")) {
        if (std::string_view(env) == "scalar") return &kernels::kScalarTable;
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    return &kernels::kScalarTable;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kernels::kScalarTable; }

const KernelTable* avx2_kernels() noexcept {
#if defined(XEB_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &kernels::kAvx2Table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = detect();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

const KernelTable& select_kernels(Isa isa) noexcept {
    const KernelTable* t = &kernels::kScalarTable;
    if (isa == Isa::Avx2 && avx2_kernels() != nullptr) t = avx2_kernels();
    g_active.store(t, std::memory_order_release);
    return *t;
}

}  // namespace xeb
