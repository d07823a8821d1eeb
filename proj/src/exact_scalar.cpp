#include "sumprod/exact_scalar.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "sumprod/error.hpp"

namespace sumprod {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

// INT64_MIN is excluded so that negation and abs never overflow.
bool fits(i128 v) noexcept { return v >= -static_cast<i128>(kMax) && v <= static_cast<i128>(kMax); }

int ctz128(u128 v) noexcept {
  auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return __builtin_ctzll(lo);
  return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

u128 gcd128(u128 a, u128 b) noexcept {
  if (a == 0) return b;
  if (b == 0) return a;
  int shift = ctz128(a | b);
  a >>= ctz128(a);
  do {
    b >>= ctz128(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

u128 uabs(i128 v) noexcept { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  u128 m = uabs(v);
  mpz_class z;
  std::uint64_t words[2] = {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m >> 64)};
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (neg) z = -z;
  return z;
}

std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_mpz(mpz_srcptr z) noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(mpz_sgn(z)) * 0x9E3779B97F4A7C15ULL;
  std::size_t n = mpz_size(z);
  for (std::size_t i = 0; i < n; ++i) h = mix(h ^ static_cast<std::uint64_t>(mpz_getlimbn(z, i)));
  return h;
}

}  // namespace

ExactScalar::ExactScalar(std::int64_t value) : num_(value), den_(1) {
  if (value == std::numeric_limits<std::int64_t>::min()) *this = from_integer(mpz_class(to_mpz(value)));
}

ExactScalar::ExactScalar(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::DivisorZero, "zero denominator");
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(uabs(n), static_cast<u128>(d));
  if (g > 1) {
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
  }
  if (fits(n) && fits(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  } else {
    *this = from_big(mpq_class(to_mpz(n), to_mpz(d)));
  }
}

ExactScalar ExactScalar::from_big(mpq_class&& q) {
  ExactScalar r;
  mpz_srcptr n = q.get_num_mpz_t();
  mpz_srcptr d = q.get_den_mpz_t();
  if (mpz_fits_slong_p(n) && mpz_fits_slong_p(d)) {
    long nv = mpz_get_si(n);
    long dv = mpz_get_si(d);
    if (nv != std::numeric_limits<long>::min()) {
      r.num_ = nv;
      r.den_ = dv;
      return r;
    }
  }
  r.big_ = std::make_shared<const mpq_class>(std::move(q));
  return r;
}

ExactScalar ExactScalar::from_mpq(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  return from_big(std::move(c));
}

ExactScalar ExactScalar::from_integer(const mpz_class& z) { return from_big(mpq_class(z)); }

ExactScalar ExactScalar::parse(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  auto bad = [&]() { return Error(ErrorKind::InputFormat, "not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();

  std::string_view body = text;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num_digits = body.substr(0, slash);
  std::string_view den_digits = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (!all_digits(num_digits) || !all_digits(den_digits)) throw bad();

  if (num_digits.size() <= 18 && den_digits.size() <= 18) {
    std::int64_t n = 0, d = 0;
    std::from_chars(num_digits.data(), num_digits.data() + num_digits.size(), n);
    std::from_chars(den_digits.data(), den_digits.data() + den_digits.size(), d);
    if (d == 0) throw Error(ErrorKind::DivisorZero, "zero denominator in '" + std::string(text) + "'");
    return ExactScalar(negative ? -n : n, d);
  }
  mpz_class n(std::string(num_digits), 10);
  mpz_class d(std::string(den_digits), 10);
  if (d == 0) throw Error(ErrorKind::DivisorZero, "zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return from_big(std::move(q));
}

int ExactScalar::sign() const noexcept {
  if (big_) return mpq_sgn(big().get_mpq_t());
  return (num_ > 0) - (num_ < 0);
}

bool ExactScalar::is_integer() const noexcept {
  if (big_) return mpz_cmp_ui(big().get_den_mpz_t(), 1) == 0;
  return den_ == 1;
}

mpq_class ExactScalar::to_mpq() const {
  if (big_) return big();
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

mpz_class ExactScalar::numerator() const {
  if (big_) return big().get_num();
  return mpz_class(static_cast<long>(num_));
}

mpz_class ExactScalar::denominator() const {
  if (big_) return big().get_den();
  return mpz_class(static_cast<long>(den_));
}

double ExactScalar::to_double() const {
  if (big_) return big().get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string ExactScalar::to_string() const {
  if (big_) return big().get_str(10);
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t ExactScalar::hash() const noexcept {
  if (big_) return hash_mpz(big().get_num_mpz_t()) ^ mix(hash_mpz(big().get_den_mpz_t()));
  return mix(static_cast<std::uint64_t>(num_) ^ mix(static_cast<std::uint64_t>(den_) + 0x632BE59BD9B4E019ULL));
}

std::size_t ExactScalar::bit_length() const noexcept {
  if (big_) {
    return std::max(mpz_sizeinbase(big().get_num_mpz_t(), 2), mpz_sizeinbase(big().get_den_mpz_t(), 2));
  }
  auto bits = [](std::int64_t v) -> std::size_t {
    auto m = static_cast<std::uint64_t>(v < 0 ? -v : v);
    return m == 0 ? 1 : 64 - __builtin_clzll(m);
  };
  return std::max(bits(num_), bits(den_));
}

std::size_t ExactScalar::footprint_bytes() const noexcept {
  if (!big_) return sizeof(ExactScalar);
  // control block + mpq struct + two limb arrays with allocator overhead
  std::size_t limbs = mpz_size(big().get_num_mpz_t()) + mpz_size(big().get_den_mpz_t());
  return sizeof(ExactScalar) + 64 + sizeof(mpq_class) + limbs * sizeof(mp_limb_t) + 32;
}

ExactScalar ExactScalar::abs() const { return sign() < 0 ? -*this : *this; }

ExactScalar ExactScalar::reciprocal() const {
  if (is_zero()) throw Error(ErrorKind::DivisorZero, "reciprocal of zero");
  if (!big_) {
    ExactScalar r;
    r.num_ = num_ < 0 ? -den_ : den_;
    r.den_ = num_ < 0 ? -num_ : num_;
    return r;
  }
  mpq_class q;
  mpq_inv(q.get_mpq_t(), big().get_mpq_t());
  return from_big(std::move(q));
}

ExactScalar operator-(const ExactScalar& a) {
  if (!a.big_) {
    ExactScalar r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }
  mpq_class q = -a.big();
  return ExactScalar::from_big(std::move(q));
}

ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      i128 s = static_cast<i128>(a.num_) + b.num_;
      if (fits(s)) return ExactScalar(static_cast<std::int64_t>(s));
      return ExactScalar::from_big(mpq_class(to_mpz(s)));
    }
    i128 num = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
    i128 den = static_cast<i128>(a.den_) * b.den_;
    u128 g = gcd128(uabs(num), static_cast<u128>(den));
    if (g > 1) {
      num /= static_cast<i128>(g);
      den /= static_cast<i128>(g);
    }
    if (fits(num) && fits(den)) {
      ExactScalar r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    return ExactScalar::from_big(mpq_class(to_mpz(num), to_mpz(den)));
  }
  mpq_class q = a.to_mpq() + b.to_mpq();
  return ExactScalar::from_big(std::move(q));
}

ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  if (!a.big_ && !b.big_) {
    std::int64_t an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
    if (ad != 1 || bd != 1) {
      std::int64_t g1 = std::gcd(an, bd);
      std::int64_t g2 = std::gcd(bn, ad);
      if (g1 > 1) {
        an /= g1;
        bd /= g1;
      }
      if (g2 > 1) {
        bn /= g2;
        ad /= g2;
      }
    }
    i128 num = static_cast<i128>(an) * bn;
    i128 den = static_cast<i128>(ad) * bd;
    if (fits(num) && fits(den)) {
      ExactScalar r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    return ExactScalar::from_big(mpq_class(to_mpz(num), to_mpz(den)));
  }
  mpq_class q = a.to_mpq() * b.to_mpq();
  return ExactScalar::from_big(std::move(q));
}

ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisorZero, "division by zero");
  return a * b.reciprocal();
}

bool operator==(const ExactScalar& a, const ExactScalar& b) noexcept {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return a.big() == b.big();
  return false;
}

std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b) noexcept {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return l <=> r;
  }
  int c = 0;
  if (a.big_ && b.big_) {
    c = cmp(a.big(), b.big());
  } else if (a.big_) {
    c = cmp(a.big(), b.to_mpq());
  } else {
    c = cmp(a.to_mpq(), b.big());
  }
  return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.to_string(); }

}  // namespace sumprod
