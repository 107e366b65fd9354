#pragma once

#include <complex>
#include <cstdint>

namespace cellia {

/// SplitMix64. Chosen for cross-platform bit-stable streams; reports record
/// the algorithm name so the draw procedure can be reproduced elsewhere.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in the open interval (0,1).
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard complex Gaussian CN(0,1), polar form: each component N(0,1/2).
  std::complex<double> gaussian() {
    const double radius = std::sqrt(-std::log(uniform()));
    const double angle = 6.283185307179586476925286766559 * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }
};

/// Decorrelated per-object stream derived from a base seed and a tag.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 mixer(tag);
  return SplitMix64(seed ^ mixer.next());
}

}  // namespace cellia
