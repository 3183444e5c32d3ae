#pragma once

#include "mklock/simd/kernels.hpp"

namespace mklock::simd {

namespace scalar {

// Word range [begin, end) of a block; vector variants use these for tails.
void eval_range(GateKind kind, const Word* const* in, std::size_t n, Word* out, std::size_t words,
                std::size_t begin, std::size_t end);
void mismatch_range(const Word* a, const Word* b, Word* acc, std::size_t words, std::size_t begin,
                    std::size_t end);

}  // namespace scalar

#if defined(MKLOCK_HAVE_AVX2)
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

}  // namespace mklock::simd
