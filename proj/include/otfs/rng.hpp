#pragma once

#include <cstdint>
#include <random>

namespace otfs {

// SplitMix64 step; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic per-trial seed derivation: seeds depend only on
// (master, stream, trial), so trials can run in any order on any number of
// workers and still use the same random draws. `stream` distinguishes sweep
// cells and per-trial sub-purposes (channel / data / noise / pilots).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream,
                                std::uint64_t trial = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ trial);
}

using Rng = std::mt19937_64;

}  // namespace otfs
