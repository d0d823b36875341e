#pragma once

#include <cstdint>
#include <string_view>

#include "mmphflab/common.hpp"

namespace mmphflab {

/// SplitMix64 finalizer; also used as the hash family of the rank-map scheme.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the t-th independent stream derived from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

/// Counter-based SplitMix64 stream. Every draw is a pure function of
/// (seed, draw index).
class SplitMix64 {
public:
    static constexpr std::string_view name = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, bound) by rejection; bound >= 1.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform on [0, 2^bits).
    BigInt random_bits(std::uint64_t bits);

    /// Uniform on [0, bound) for big bounds (rejection on bit length).
    BigInt below(const BigInt& bound);

    /// Uniform in [0, 1).
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace mmphflab
