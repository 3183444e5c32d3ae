#include "mklock/engine.hpp"

#include <algorithm>
#include <cstring>

#include "mklock/error.hpp"

namespace mklock {

using simd::Word;

CompiledCircuit::CompiledCircuit(const Netlist& n) : net_count_(n.net_count()), dffs_(n.dffs) {
    if (auto v = validate(n); !v.empty()) throw Error("cannot simulate invalid netlist: " + v.front().message);
    const auto order = topo_order(n);
    ops_.reserve(order.size());
    for (std::size_t gi : order) {
        const auto& g = n.gates[gi];
        ops_.push_back({g.kind, g.output, static_cast<std::uint32_t>(fanins_.size()),
                        static_cast<std::uint32_t>(g.fanins.size())});
        fanins_.insert(fanins_.end(), g.fanins.begin(), g.fanins.end());
        max_fanin_ = std::max(max_fanin_, g.fanins.size());
    }
}

LaneSim::LaneSim(const CompiledCircuit& circuit, std::size_t words, const simd::KernelTable& kernels)
    : circuit_(&circuit),
      kernels_(&kernels),
      words_(words),
      values_(circuit.net_count() * 2 * words, 0),
      staging_(circuit.dffs().size() * 2 * words, 0),
      fanin_ptrs_(circuit.max_fanin()) {
    if (words == 0) throw Error("lane batch needs at least one word");
}

void LaneSim::fill(NetId id, Logic v) {
    Word* b = block(id);
    std::fill(b, b + words_, v == Logic::One ? ~Word{0} : Word{0});
    std::fill(b + words_, b + 2 * words_, v == Logic::Zero ? ~Word{0} : Word{0});
}

void LaneSim::set(NetId id, std::size_t lane, Logic v) noexcept {
    Word* b = block(id);
    const std::size_t w = lane / 64;
    const Word bit = Word{1} << (lane % 64);
    b[w] = v == Logic::One ? (b[w] | bit) : (b[w] & ~bit);
    b[words_ + w] = v == Logic::Zero ? (b[words_ + w] | bit) : (b[words_ + w] & ~bit);
}

Logic LaneSim::get(NetId id, std::size_t lane) const noexcept {
    const Word* b = block(id);
    const std::size_t w = lane / 64;
    const Word bit = Word{1} << (lane % 64);
    if (b[w] & bit) return Logic::One;
    if (b[words_ + w] & bit) return Logic::Zero;
    return Logic::X;
}

void LaneSim::set_word(NetId id, std::size_t word, Word ones) noexcept {
    Word* b = block(id);
    b[word] = ones;
    b[words_ + word] = ~ones;
}

void LaneSim::reset_state(Logic v) {
    for (const auto& d : circuit_->dffs()) fill(d.output, v);
}

void LaneSim::evaluate() {
    const auto fanins = circuit_->fanins();
    for (const auto& op : circuit_->ops()) {
        for (std::uint32_t i = 0; i < op.count; ++i) fanin_ptrs_[i] = block(fanins[op.first + i]);
        kernels_->eval_gate(op.kind, fanin_ptrs_.data(), op.count, block(op.out), words_);
    }
}

void LaneSim::clock() {
    const auto dffs = circuit_->dffs();
    const std::size_t span = 2 * words_;
    for (std::size_t i = 0; i < dffs.size(); ++i) {
        std::memcpy(staging_.data() + i * span, block(dffs[i].input), span * sizeof(Word));
    }
    for (std::size_t i = 0; i < dffs.size(); ++i) {
        std::memcpy(block(dffs[i].output), staging_.data() + i * span, span * sizeof(Word));
    }
}

}  // namespace mklock
