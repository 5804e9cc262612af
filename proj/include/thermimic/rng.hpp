#pragma once

#include <cstdint>
#include <random>

namespace thermimic::rng {

// SplitMix64 finalizer; used to derive independent stream seeds from (seed, index).
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix(mix(seed) ^ (index * 0xd1b54a32d192ed03ULL));
}

using Engine = std::mt19937_64;

// Uniform in [0, 1) with 53 random bits. Spelled out instead of
// std::uniform_real_distribution so streams match across standard libraries.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace thermimic::rng
