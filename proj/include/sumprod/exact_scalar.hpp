#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sumprod {

/// Exact rational number in canonical form (gcd(|num|, den) = 1, den > 0).
///
/// Values whose numerator and denominator both fit in a signed 64-bit word
/// (excluding INT64_MIN) are stored inline and combined with 128-bit
/// intermediates. Anything larger is promoted to a shared, immutable GMP
/// rational. The representation is canonical: a value that fits inline is
/// never stored as a GMP rational, so equality and hashing may look at the
/// representation directly.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(std::int64_t value);  // NOLINT(google-explicit-constructor)
  ExactScalar(std::int64_t num, std::int64_t den);

  static ExactScalar from_mpq(const mpq_class& q);
  static ExactScalar from_integer(const mpz_class& z);

  /// Parses "[-+]digits" or "[-+]digits/digits" (denominator > 0).
  /// Throws Error(InputFormat) on malformed text, Error(DivisorZero) on "p/0".
  static ExactScalar parse(std::string_view text);

  int sign() const noexcept;
  bool is_zero() const noexcept { return sign() == 0; }
  bool is_integer() const noexcept;
  bool is_small() const noexcept { return !big_; }

  // Only meaningful when is_small().
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;
  double to_double() const;
  std::string to_string() const;
  std::size_t hash() const noexcept;

  /// Bits of the larger of |numerator|, denominator.
  std::size_t bit_length() const noexcept;
  /// Rough heap+inline footprint of one element, used for memory budgeting.
  std::size_t footprint_bytes() const noexcept;

  ExactScalar abs() const;
  ExactScalar reciprocal() const;

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);
  friend ExactScalar operator-(const ExactScalar& a);

  ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
  ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
  ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) noexcept;
  friend std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b) noexcept;

 private:
  static ExactScalar from_big(mpq_class&& q);
  const mpq_class& big() const noexcept { return *big_; }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

}  // namespace sumprod

template <>
struct std::hash<sumprod::ExactScalar> {
  std::size_t operator()(const sumprod::ExactScalar& x) const noexcept { return x.hash(); }
};
