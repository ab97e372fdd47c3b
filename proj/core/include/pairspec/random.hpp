#pragma once

#include <cstdint>
#include <random>

namespace pairspec {

/// Per-trial random stream. Trials never share a stream: each one is seeded
/// independently through derive_seed, which makes ensembles reproducible for
/// a fixed master seed and invariant under the number of workers.
using RandomStream = std::mt19937_64;

/// Distinguishes independent stream families derived from one master seed.
enum class StreamRole : std::uint64_t {
    trial = 0x7472,        // pair-source trials
    coherent = 0x636f,     // ideal-laser comparator trials
    scan_sample = 0x7373,  // per-scan-point stream master, sample in place
    scan_system = 0x7379,  // per-scan-point stream master, sample removed
    resolve = 0x7265,      // per-increment stream master in resolution sweeps
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based seed derivation: a well-mixed 64-bit seed from
/// (master, index, role). Same inputs always yield the same seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    StreamRole role) {
    std::uint64_t s = detail::mix64(master);
    s = detail::mix64(s ^ detail::mix64(index));
    s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(role)));
    return s;
}

inline RandomStream make_stream(std::uint64_t master, std::uint64_t index,
                                StreamRole role) {
    return RandomStream(derive_seed(master, index, role));
}

}  // namespace pairspec
