#pragma once

#include <cstdint>
#include <random>

namespace bnsl {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based seed derivation: independent streams for (master, index) pairs,
/// insensitive to the order in which streams are consumed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x517cc1b727220a95ULL));
}

/// Uniform double in [0,1) with exactly 53 random bits; identical on every
/// platform, unlike std::uniform_real_distribution.
inline double canonical(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace bnsl
