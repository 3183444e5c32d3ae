#include "kernels_internal.hpp"
#include "mklock/error.hpp"

namespace mklock::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(MKLOCK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
#if defined(MKLOCK_HAVE_AVX2)
    static const bool usable = cpu_has_avx2();
    return usable ? &avx2::table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels(Backend backend) {
    if (backend == Backend::Scalar) return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    throw Error("AVX2 kernels unavailable on this build or CPU");
}

const KernelTable& best_kernels() noexcept {
    if (const auto* t = avx2_kernels()) return *t;
    return scalar_kernels();
}

}  // namespace mklock::simd
