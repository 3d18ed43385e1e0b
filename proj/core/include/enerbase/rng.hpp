#pragma once

#include <cstdint>

namespace enerbase {

/// SplitMix64 (Steele, Lea, Flood 2014). Pinned generator for every seeded
/// operation in this library: outputs are part of the reproducibility
/// contract and must not change. State advances by the golden-gamma
/// increment; each next() finalizes a copy of the state.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, n); n must be > 0. Fixed-point multiply keeps the
    /// mapping platform-independent (bias < 2^-64, irrelevant here).
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

/// Derives an independent stream seed from a user seed and a stream tag.
/// Used to decouple e.g. dropout and corruption subsets drawn from one
/// fault-plan seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mix(seed ^ (0x6a09e667f3bcc909ULL + stream));
    return mix.next();
}

} // namespace enerbase
