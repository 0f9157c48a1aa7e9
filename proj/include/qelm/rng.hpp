#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qelm {

// FNV-1a, used for stage-seed derivation and config fingerprints.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// One global seed fans out to per-stage seeds so stages can be re-run in
// isolation without seed bookkeeping.
inline std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) {
    return splitmix64(global_seed ^ fnv1a(stage));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

}  // namespace qelm
