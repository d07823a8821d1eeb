#pragma once

#include <cstdint>
#include <vector>

namespace sumprod {

/// All primes p < bound, increasing (sieve of Eratosthenes).
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

bool is_prime(std::uint64_t x);

/// Smallest prime strictly greater than x.
std::uint64_t next_prime(std::uint64_t x);

/// Number of distinct primes in `primes` dividing x.
unsigned count_prime_divisors(std::uint64_t x, const std::vector<std::uint64_t>& primes);

/// Sum over `primes` of min(v_p(x), 2).
unsigned capped_valuation_sum(std::uint64_t x, const std::vector<std::uint64_t>& primes);

}  // namespace sumprod
