#pragma once

#include <cstdint>

namespace ergolab {

// splitmix64: the single mixing primitive behind every stochastic choice.
// Per-cell / per-point streams are derived by hashing (seed, index) pairs,
// so results are independent of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4B5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (0x9E3779B97F4A7C15ull + (b << 6) + (b >> 2)));
}

// 53-bit uniform in [0,1).
inline double u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace ergolab
