// Reproducible random streams.  A master seed is split into per-task streams
// with SplitMix64 (stream i seeds an mt19937_64 with splitmix(master ^ i-th
// odd constant step)); all samplers draw raw 64-bit words from the engine so
// runs with the same seed are bit-identical on a given build.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hfsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream `index` derived from the master seed; documented split function so
// concurrent settings/resamples stay reproducible.
inline std::mt19937_64 derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  std::uint64_t mixed = splitmix64(s) ^ (0xd1b54a32d192ed03ULL * (index + 1));
  return std::mt19937_64(splitmix64(mixed));
}

// Uniform in [0,1) from the top 53 bits of one engine word.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on raw uniforms.
inline double standard_normal(std::mt19937_64& eng) {
  double u1 = uniform01(eng);
  double u2 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Poisson sampler: Knuth's product method below mean 256, rounded Gaussian
// approximation above (skew is negligible there and the cost stays O(1)).
inline std::uint64_t poisson(double mean, std::mt19937_64& eng) {
  if (mean <= 0.0) return 0;
  if (mean < 256.0) {
    double limit = std::exp(-mean);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
      ++k;
      p *= uniform01(eng);
    } while (p > limit);
    return k - 1;
  }
  double draw = mean + std::sqrt(mean) * standard_normal(eng);
  return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(draw));
}

}  // namespace hfsim
