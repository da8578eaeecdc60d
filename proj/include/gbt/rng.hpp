#pragma once

#include <cstdint>

namespace gbt {

/// SplitMix64 finalizer.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based uniform draw in [0,1) keyed by (seed, index, lane). Any
/// sample can be regenerated on its own, so parallel loops need no shared
/// generator state.
inline constexpr double counter_uniform(std::uint64_t seed, std::uint64_t index,
                                        std::uint32_t lane) noexcept {
    const std::uint64_t h = splitmix64(seed ^ splitmix64(index * 8 + lane));
    return static_cast<double>(h >> 11) * 0x1p-53;
}

inline constexpr std::uint64_t kDefaultSeed = 20240917ULL;

}  // namespace gbt
