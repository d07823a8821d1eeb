#pragma once

#include <cstdint>

namespace sumprod::driver {

/// splitmix64: state += 0x9E3779B97F4A7C15, then the output mix
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z ^ (z >> 31)
/// all modulo 2^64.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform value in [0, k) by rejection: draws below (2^64 - k) mod k are
  /// discarded, the first accepted draw r gives r mod k. Requires k >= 1.
  std::uint64_t uniform(std::uint64_t k);

 private:
  std::uint64_t state_;
};

}  // namespace sumprod::driver
