#include <gtest/gtest.h>

#include <vector>

#include "mklock/logic.hpp"
#include "mklock/random.hpp"
#include "mklock/simd/kernels.hpp"
#include "support.hpp"

using namespace mklock;
using simd::Word;

namespace {

constexpr GateKind kKinds[] = {GateKind::And, GateKind::Nand, GateKind::Or,  GateKind::Nor,
                               GateKind::Xor, GateKind::Xnor, GateKind::Not, GateKind::Buf};

// Random 3-valued block: every lane is 0, 1 or X, never both bits.
std::vector<Word> random_block(Rng& rng, std::size_t words) {
    std::vector<Word> b(2 * words);
    for (std::size_t w = 0; w < words; ++w) {
        const Word known = rng.next() | rng.next();  // about 3/4 of lanes defined
        const Word ones = rng.next() & known;
        b[w] = ones;
        b[words + w] = known & ~ones;
    }
    return b;
}

Logic lane(const std::vector<Word>& b, std::size_t words, std::size_t l) {
    const Word bit = Word{1} << (l % 64);
    if (b[l / 64] & bit) return Logic::One;
    if (b[words + l / 64] & bit) return Logic::Zero;
    return Logic::X;
}

std::vector<const simd::KernelTable*> backends() {
    std::vector<const simd::KernelTable*> out{&simd::scalar_kernels()};
    if (const auto* a = simd::avx2_kernels()) out.push_back(a);
    return out;
}

}  // namespace

TEST(Logic, KleeneTables) {
    const Logic z = Logic::Zero, o = Logic::One, x = Logic::X;
    std::vector<Logic> zx{z, x}, ox{o, x}, xx{x, x};
    EXPECT_EQ(kleene_eval(GateKind::And, zx), z);
    EXPECT_EQ(kleene_eval(GateKind::And, ox), x);
    EXPECT_EQ(kleene_eval(GateKind::Or, ox), o);
    EXPECT_EQ(kleene_eval(GateKind::Or, zx), x);
    EXPECT_EQ(kleene_eval(GateKind::Nand, zx), o);
    EXPECT_EQ(kleene_eval(GateKind::Xor, ox), x);
    EXPECT_EQ(kleene_eval(GateKind::Xnor, xx), x);
    EXPECT_EQ(to_char(x), 'x');
    EXPECT_EQ(logic_from_char('X'), x);
    EXPECT_EQ(logic_from_char('1'), o);
    EXPECT_FALSE(logic_from_char('2').has_value());
}

TEST(Logic, KleeneAgreesWithReferenceTables) {
    const Logic all[] = {Logic::Zero, Logic::One, Logic::X};
    for (GateKind kind : kKinds) {
        const std::size_t arity = is_unary(kind) ? 1 : 3;
        std::size_t combos = 1;
        for (std::size_t i = 0; i < arity; ++i) combos *= 3;
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<Logic> in;
            for (std::size_t i = 0, v = c; i < arity; ++i, v /= 3) in.push_back(all[v % 3]);
            EXPECT_EQ(kleene_eval(kind, in), testsupport::ref_gate(kind, in));
        }
    }
}

TEST(Kernels, EveryBackendMatchesKleeneLaneByLane) {
    Rng rng(2024);
    for (const auto* k : backends()) {
        for (GateKind kind : kKinds) {
            for (std::size_t arity = 1; arity <= 5; ++arity) {
                if (is_unary(kind) != (arity == 1)) continue;
                for (std::size_t words : {1u, 3u, 4u, 5u, 9u}) {
                    std::vector<std::vector<Word>> ins;
                    std::vector<const Word*> ptrs;
                    for (std::size_t i = 0; i < arity; ++i) ins.push_back(random_block(rng, words));
                    for (const auto& b : ins) ptrs.push_back(b.data());
                    std::vector<Word> out(2 * words, 0xdeadbeef);
                    k->eval_gate(kind, ptrs.data(), arity, out.data(), words);
                    for (std::size_t l = 0; l < words * 64; ++l) {
                        std::vector<Logic> in;
                        for (const auto& b : ins) in.push_back(lane(b, words, l));
                        ASSERT_EQ(lane(out, words, l), kleene_eval(kind, in))
                            << k->name << " " << to_string(kind) << " arity " << arity << " lane " << l;
                    }
                    for (std::size_t w = 0; w < words; ++w) ASSERT_EQ(out[w] & out[words + w], 0u);
                }
            }
        }
    }
}

TEST(Kernels, BackendsAgreeBitForBit) {
    const auto* avx = simd::avx2_kernels();
    if (!avx) GTEST_SKIP() << "AVX2 not available";
    const auto& scalar = simd::scalar_kernels();
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const GateKind kind = kKinds[rng.below(8)];
        const std::size_t arity = is_unary(kind) ? 1 : 2 + rng.below(6);
        const std::size_t words = 1 + rng.below(20);
        std::vector<std::vector<Word>> ins;
        std::vector<const Word*> ptrs;
        for (std::size_t i = 0; i < arity; ++i) ins.push_back(random_block(rng, words));
        for (const auto& b : ins) ptrs.push_back(b.data());
        std::vector<Word> a(2 * words), b(2 * words);
        scalar.eval_gate(kind, ptrs.data(), arity, a.data(), words);
        avx->eval_gate(kind, ptrs.data(), arity, b.data(), words);
        ASSERT_EQ(a, b);

        std::vector<Word> acc_a(words, 0), acc_b(words, 0);
        scalar.accumulate_mismatch(ins[0].data(), a.data(), acc_a.data(), words);
        avx->accumulate_mismatch(ins[0].data(), a.data(), acc_b.data(), words);
        ASSERT_EQ(acc_a, acc_b);
    }
}

TEST(Kernels, MismatchTreatsXAsEqualToX) {
    for (const auto* k : backends()) {
        Rng rng(5);
        const std::size_t words = 6;
        const auto a = random_block(rng, words);
        const auto b = random_block(rng, words);
        std::vector<Word> acc(words, 0);
        k->accumulate_mismatch(a.data(), b.data(), acc.data(), words);
        for (std::size_t l = 0; l < words * 64; ++l) {
            const bool differ = lane(a, words, l) != lane(b, words, l);
            EXPECT_EQ(((acc[l / 64] >> (l % 64)) & 1U) != 0, differ) << k->name;
        }
        std::fill(acc.begin(), acc.end(), 0);
        k->accumulate_mismatch(a.data(), a.data(), acc.data(), words);
        for (Word w : acc) EXPECT_EQ(w, 0u);
    }
}

TEST(Kernels, DispatchPicksAvailableBackend) {
    EXPECT_EQ(simd::kernels(simd::Backend::Scalar).name, simd::scalar_kernels().name);
    if (simd::avx2_kernels()) {
        EXPECT_EQ(simd::best_kernels().name, simd::avx2_kernels()->name);
    } else {
        EXPECT_EQ(simd::best_kernels().name, simd::scalar_kernels().name);
    }
}
