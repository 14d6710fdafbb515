#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace signet {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Generator for stream `stream` of a master seed. Streams are decorrelated by
// running the (seed, stream) pair through splitmix64 before seeding, so
// replicates can be assigned to worker threads in any order without changing
// the numbers each replicate sees.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = master_seed;
    (void)splitmix64(s);
    s ^= 0xd1342543de82ef95ull * (stream + 1);
    std::uint32_t material[8];
    for (auto& w : material) w = static_cast<std::uint32_t>(splitmix64(s) >> 32);
    std::seed_seq seq(material, material + 8);
    return std::mt19937_64(seq);
}

// Uniform double in [0,1). Bypasses std::uniform_real_distribution so results
// do not depend on the standard library implementation.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) via rejection.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

inline double exponential(std::mt19937_64& g, double rate) {
    return -std::log1p(-uniform01(g)) / rate;
}

} // namespace signet
