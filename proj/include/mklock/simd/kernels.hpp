#pragma once

// Bit-parallel 3-valued gate kernels.
//
// A net's value over a batch of lanes is a block of 2*W 64-bit words:
// words [0, W) are the "is one" plane and [W, 2W) the "is zero" plane.
// A lane with neither bit set is X; both bits set never occurs.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "mklock/netlist.hpp"

namespace mklock::simd {

using Word = std::uint64_t;

struct KernelTable {
    std::string_view name;
    // out = kind(fanins...) over W words per plane. out must not alias a fanin.
    void (*eval_gate)(GateKind kind, const Word* const* fanins, std::size_t fanin_count, Word* out,
                      std::size_t words);
    // acc[w] |= lanes where blocks a and b differ (X vs X counts as equal).
    void (*accumulate_mismatch)(const Word* a, const Word* b, Word* acc, std::size_t words);
};

enum class Backend { Scalar, Avx2 };

[[nodiscard]] const KernelTable& scalar_kernels() noexcept;
// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
[[nodiscard]] const KernelTable* avx2_kernels() noexcept;
[[nodiscard]] const KernelTable& kernels(Backend backend);
// Widest variant the running CPU supports.
[[nodiscard]] const KernelTable& best_kernels() noexcept;

}  // namespace mklock::simd
