#include "sumprod/primes.hpp"

namespace sumprod {

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound <= 2) return out;
  std::vector<bool> composite(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t x) {
  std::uint64_t p = x + 1;
  while (!is_prime(p)) ++p;
  return p;
}

unsigned count_prime_divisors(std::uint64_t x, const std::vector<std::uint64_t>& primes) {
  unsigned c = 0;
  for (auto p : primes) c += (x % p == 0);
  return c;
}

unsigned capped_valuation_sum(std::uint64_t x, const std::vector<std::uint64_t>& primes) {
  unsigned g = 0;
  for (auto p : primes) {
    if (x % p != 0) continue;
    g += (x % (p * p) == 0) ? 2 : 1;
  }
  return g;
}

}  // namespace sumprod
