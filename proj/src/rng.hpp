#pragma once

#include <cstdint>
#include <random>

namespace psimax {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent engine for one (root seed, stream id) pair. The engine
/// depends only on that pair, so work can be split across threads freely.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream_id)));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform01_open_low(std::mt19937_64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace psimax
