// Counter-based per-cell noise. Each sample is a pure function of
// (seed, i, j), so initial-condition noise does not depend on traversal order.
#pragma once

#include <cstdint>

namespace nlkm {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Uniform sample in [-1, 1) keyed on (seed, i, j).
inline double cell_noise(std::uint64_t seed, int i, int j) {
    std::uint64_t h = detail::splitmix64(seed);
    h = detail::splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 1));
    h = detail::splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(j)));
    const double u01 = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0,1)
    return 2.0 * u01 - 1.0;
}

}  // namespace nlkm
