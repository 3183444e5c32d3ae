#include "kernels_internal.hpp"

namespace mklock::simd {

namespace scalar {

void eval_range(GateKind kind, const Word* const* in, std::size_t n, Word* out, std::size_t words,
                std::size_t begin, std::size_t end) {
    Word* one = out;
    Word* zero = out + words;
    switch (kind) {
        case GateKind::Buf:
            for (std::size_t w = begin; w < end; ++w) {
                one[w] = in[0][w];
                zero[w] = in[0][words + w];
            }
            return;
        case GateKind::Not:
            for (std::size_t w = begin; w < end; ++w) {
                one[w] = in[0][words + w];
                zero[w] = in[0][w];
            }
            return;
        case GateKind::And:
        case GateKind::Nand:
            for (std::size_t w = begin; w < end; ++w) {
                Word o = in[0][w];
                Word z = in[0][words + w];
                for (std::size_t i = 1; i < n; ++i) {
                    o &= in[i][w];
                    z |= in[i][words + w];
                }
                if (kind == GateKind::And) {
                    one[w] = o;
                    zero[w] = z;
                } else {
                    one[w] = z;
                    zero[w] = o;
                }
            }
            return;
        case GateKind::Or:
        case GateKind::Nor:
            for (std::size_t w = begin; w < end; ++w) {
                Word o = in[0][w];
                Word z = in[0][words + w];
                for (std::size_t i = 1; i < n; ++i) {
                    o |= in[i][w];
                    z &= in[i][words + w];
                }
                if (kind == GateKind::Or) {
                    one[w] = o;
                    zero[w] = z;
                } else {
                    one[w] = z;
                    zero[w] = o;
                }
            }
            return;
        case GateKind::Xor:
        case GateKind::Xnor:
            for (std::size_t w = begin; w < end; ++w) {
                Word o = in[0][w];
                Word z = in[0][words + w];
                for (std::size_t i = 1; i < n; ++i) {
                    const Word bo = in[i][w];
                    const Word bz = in[i][words + w];
                    const Word no = (o & bz) | (z & bo);
                    z = (o & bo) | (z & bz);
                    o = no;
                }
                if (kind == GateKind::Xor) {
                    one[w] = o;
                    zero[w] = z;
                } else {
                    one[w] = z;
                    zero[w] = o;
                }
            }
            return;
    }
}

void mismatch_range(const Word* a, const Word* b, Word* acc, std::size_t words, std::size_t begin,
                    std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
        acc[w] |= (a[w] ^ b[w]) | (a[words + w] ^ b[words + w]);
    }
}

namespace {

void eval_gate(GateKind kind, const Word* const* in, std::size_t n, Word* out, std::size_t words) {
    eval_range(kind, in, n, out, words, 0, words);
}

void accumulate_mismatch(const Word* a, const Word* b, Word* acc, std::size_t words) {
    mismatch_range(a, b, acc, words, 0, words);
}

}  // namespace

}  // namespace scalar

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{"scalar", &scalar::eval_gate, &scalar::accumulate_mismatch};
    return table;
}

}  // namespace mklock::simd
