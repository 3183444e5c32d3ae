// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace mklock::simd::avx2 {

namespace {

constexpr std::size_t kStep = 4;  // 64-bit words per __m256i

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Word* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

inline void put(Word* out, std::size_t words, std::size_t w, __m256i o, __m256i z, bool inverted) {
    store(out + w, inverted ? z : o);
    store(out + words + w, inverted ? o : z);
}

void eval_gate(GateKind kind, const Word* const* in, std::size_t n, Word* out, std::size_t words) {
    const std::size_t body = words - words % kStep;
    std::size_t w = 0;
    switch (kind) {
        case GateKind::Buf:
        case GateKind::Not:
            for (; w < body; w += kStep) {
                put(out, words, w, load(in[0] + w), load(in[0] + words + w), kind == GateKind::Not);
            }
            break;
        case GateKind::And:
        case GateKind::Nand:
            for (; w < body; w += kStep) {
                __m256i o = load(in[0] + w);
                __m256i z = load(in[0] + words + w);
                for (std::size_t i = 1; i < n; ++i) {
                    o = _mm256_and_si256(o, load(in[i] + w));
                    z = _mm256_or_si256(z, load(in[i] + words + w));
                }
                put(out, words, w, o, z, kind == GateKind::Nand);
            }
            break;
        case GateKind::Or:
        case GateKind::Nor:
            for (; w < body; w += kStep) {
                __m256i o = load(in[0] + w);
                __m256i z = load(in[0] + words + w);
                for (std::size_t i = 1; i < n; ++i) {
                    o = _mm256_or_si256(o, load(in[i] + w));
                    z = _mm256_and_si256(z, load(in[i] + words + w));
                }
                put(out, words, w, o, z, kind == GateKind::Nor);
            }
            break;
        case GateKind::Xor:
        case GateKind::Xnor:
            for (; w < body; w += kStep) {
                __m256i o = load(in[0] + w);
                __m256i z = load(in[0] + words + w);
                for (std::size_t i = 1; i < n; ++i) {
                    const __m256i bo = load(in[i] + w);
                    const __m256i bz = load(in[i] + words + w);
                    const __m256i no = _mm256_or_si256(_mm256_and_si256(o, bz), _mm256_and_si256(z, bo));
                    z = _mm256_or_si256(_mm256_and_si256(o, bo), _mm256_and_si256(z, bz));
                    o = no;
                }
                put(out, words, w, o, z, kind == GateKind::Xnor);
            }
            break;
    }
    if (body < words) scalar::eval_range(kind, in, n, out, words, body, words);
}

void accumulate_mismatch(const Word* a, const Word* b, Word* acc, std::size_t words) {
    const std::size_t body = words - words % kStep;
    for (std::size_t w = 0; w < body; w += kStep) {
        const __m256i d1 = _mm256_xor_si256(load(a + w), load(b + w));
        const __m256i d0 = _mm256_xor_si256(load(a + words + w), load(b + words + w));
        store(acc + w, _mm256_or_si256(load(acc + w), _mm256_or_si256(d1, d0)));
    }
    if (body < words) scalar::mismatch_range(a, b, acc, words, body, words);
}

}  // namespace

const KernelTable& table() noexcept {
    static const KernelTable t{"avx2", &eval_gate, &accumulate_mismatch};
    return t;
}

}  // namespace mklock::simd::avx2
