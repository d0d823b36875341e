#include "mmphflab/rng.hpp"

#include <vector>

namespace mmphflab {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) {
        throw InvalidInput("SplitMix64::below: empty range");
    }
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    for (;;) {
        std::uint64_t draw = next();
        if (draw <= limit) {
            return draw % bound;
        }
    }
}

BigInt SplitMix64::random_bits(std::uint64_t bits) {
    BigInt out;
    if (bits == 0) {
        return out;
    }
    const std::uint64_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buffer(words);
    for (auto& w : buffer) {
        w = next();
    }
    const unsigned spare = static_cast<unsigned>(words * 64 - bits);
    if (spare != 0) {
        buffer.back() >>= spare;
    }
    mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buffer.data());
    return out;
}

BigInt SplitMix64::below(const BigInt& bound) {
    if (bound <= 0) {
        throw InvalidInput("SplitMix64::below: empty range");
    }
    const std::uint64_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    for (;;) {
        BigInt draw = random_bits(bits);
        if (draw < bound) {
            return draw;
        }
    }
}

}  // namespace mmphflab
