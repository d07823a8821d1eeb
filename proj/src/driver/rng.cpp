#include "sumprod/driver/rng.hpp"

namespace sumprod::driver {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::uniform(std::uint64_t k) {
  const std::uint64_t threshold = (0 - k) % k;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % k;
  }
}

}  // namespace sumprod::driver
