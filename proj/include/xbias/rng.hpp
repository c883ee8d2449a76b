#pragma once

#include <cstdint>
#include <random>

namespace xbias {

// Default seed for every randomized entry point.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED'B1A5'0000'0001ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Substream splitting rule: stream i of master seed s is seeded with
// splitmix64(s ^ splitmix64(i)). Work is cut into fixed-size blocks and block
// b always uses stream b, so results do not depend on the worker count.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(substream_seed(seed, stream));
}

// 53-bit uniform in [0, 1). Spelled out because std::uniform_real_distribution
// is not bit-reproducible across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& rng, double p) { return uniform01(rng) < p; }

}  // namespace xbias
