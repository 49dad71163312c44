#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace coopnet {

// splitmix64; used to derive independent substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic per-trial stream: hash(master, cell, trial). Trials are
// replayable in isolation and independent of worker count.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t cell,
                                   std::uint64_t trial) {
    std::uint64_t s = splitmix64(master ^ splitmix64(cell ^ splitmix64(trial)));
    return std::mt19937_64(s);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace coopnet
