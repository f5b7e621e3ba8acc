#pragma once

#include <cstdint>
#include <random>

namespace alpos {

// splitmix64 step; used to derive independent stream seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a68b021502fdULL;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for a named stream: mixes the base seed with up to
// three stream coordinates (e.g. realization index, bs count, purpose tag).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = base;
    splitmix64(s);
    s ^= a * 0xd6e8feb86659fd93ULL;
    splitmix64(s);
    s ^= b * 0xa3ec647659359acdULL;
    splitmix64(s);
    s ^= c * 0xc2b2ae3d27d4eb4fULL;
    return splitmix64(s);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace alpos
