#pragma once

#include <cstdint>
#include <random>

namespace pco {

// Replicate r of experiment e under master seed s always draws from the
// stream keyed by (s, e, r), so thread scheduling cannot change results.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + (b << 1)));
}

// Stable stream key for (seed, experiment, replicate).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t experiment,
                                std::uint64_t replicate) {
    return mix(mix(seed, experiment), replicate);
}

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t experiment,
                              std::uint64_t replicate) {
    return std::mt19937_64(stream_key(seed, experiment, replicate));
}

// Experiment tags; fixed numbers, never reordered, so old seeds replay.
enum Experiment : std::uint64_t {
    EXP_OBSERVE = 1,
    EXP_SIGNAL = 2,
    EXP_MC_RISK = 3,
    EXP_CONC_Z = 4,
    EXP_CALIBRATE = 5,
    EXP_REGRESS = 6,
    EXP_GENERIC = 7,
};

} // namespace rng
} // namespace pco
