#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mklock/logic.hpp"
#include "mklock/netlist.hpp"
#include "mklock/simd/kernels.hpp"

namespace mklock {

// Netlist flattened into a levelized op list. Immutable; share freely.
class CompiledCircuit {
public:
    struct Op {
        GateKind kind;
        NetId out;
        std::uint32_t first;  // index into fanins()
        std::uint32_t count;
    };

    // Throws mklock::Error when validate(n) is not empty.
    explicit CompiledCircuit(const Netlist& n);

    [[nodiscard]] std::size_t net_count() const noexcept { return net_count_; }
    [[nodiscard]] std::span<const Op> ops() const noexcept { return ops_; }
    [[nodiscard]] std::span<const NetId> fanins() const noexcept { return fanins_; }
    [[nodiscard]] std::span<const Dff> dffs() const noexcept { return dffs_; }
    [[nodiscard]] std::size_t max_fanin() const noexcept { return max_fanin_; }

private:
    std::size_t net_count_ = 0;
    std::vector<Op> ops_;
    std::vector<NetId> fanins_;
    std::vector<Dff> dffs_;
    std::size_t max_fanin_ = 1;
};

// Mutable batch state: one 3-valued value per (net, lane), 64 lanes per
// word. Inputs and flip-flop outputs are written by the caller; evaluate()
// fills every gate output and clock() moves D values into the flip-flops.
class LaneSim {
public:
    LaneSim(const CompiledCircuit& circuit, std::size_t words,
            const simd::KernelTable& kernels = simd::best_kernels());

    [[nodiscard]] std::size_t words() const noexcept { return words_; }
    [[nodiscard]] std::size_t lanes() const noexcept { return words_ * 64; }
    [[nodiscard]] const simd::KernelTable& kernels() const noexcept { return *kernels_; }

    [[nodiscard]] simd::Word* block(NetId id) noexcept { return values_.data() + id * 2 * words_; }
    [[nodiscard]] const simd::Word* block(NetId id) const noexcept { return values_.data() + id * 2 * words_; }

    void fill(NetId id, Logic v);
    void set(NetId id, std::size_t lane, Logic v) noexcept;
    [[nodiscard]] Logic get(NetId id, std::size_t lane) const noexcept;
    // Sets a 64-lane word directly: `ones` lanes are 1, the rest 0.
    void set_word(NetId id, std::size_t word, simd::Word ones) noexcept;

    void reset_state(Logic v);
    void evaluate();
    void clock();

private:
    const CompiledCircuit* circuit_;
    const simd::KernelTable* kernels_;
    std::size_t words_;
    std::vector<simd::Word> values_;
    std::vector<simd::Word> staging_;
    std::vector<const simd::Word*> fanin_ptrs_;
};

}  // namespace mklock
