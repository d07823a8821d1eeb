#include "sumprod/set_ops.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <span>

#include "sumprod/bitset.hpp"
#include "sumprod/error.hpp"
#include "unique_engine.hpp"

namespace sumprod {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::sum: return "sum";
    case BinaryOp::difference: return "difference";
    case BinaryOp::product: return "product";
    case BinaryOp::ratio: return "ratio";
  }
  return "unknown";
}

namespace {

using i128 = __int128;

constexpr i128 kSmallMax = std::numeric_limits<std::int64_t>::max();

std::size_t max_bits(const FiniteSet& s) {
  std::size_t b = 0;
  for (const auto& x : s) b = std::max(b, x.bit_length());
  return b;
}

// Estimated bytes per generated value for a result combining two operands.
std::uint64_t value_bytes(std::size_t bits) {
  if (bits <= 62) return sizeof(ExactScalar);
  return sizeof(ExactScalar) + 160 + 2 * (bits / 8 + 8);
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t partitions_for(std::uint64_t values, std::uint64_t bytes_per_value, std::uint64_t overhead,
                             std::uint64_t budget) {
  std::uint64_t need = mul_sat(mul_sat(values, bytes_per_value), overhead);
  budget = std::max<std::uint64_t>(budget, 1);
  return need / budget + 1;
}

void require_ratio_divisor(const FiniteSet& b) {
  if (b.contains_zero()) throw Error(ErrorKind::DivisorZero, "ratio set with 0 in the divisor set");
}

// ---------------------------------------------------------------------------
// Integer bit-vector path

struct IntBits {
  Bitset bits;
  std::int64_t offset = 0;  // value of bit 0

  FiniteSet to_set() const {
    std::vector<ExactScalar> v;
    v.reserve(bits.count());
    bits.for_each_set([&](std::uint64_t i) { v.emplace_back(offset + static_cast<std::int64_t>(i)); });
    return FiniteSet::from_sorted_unique(std::move(v));
  }
};

bool range_ok(i128 lo, i128 hi, std::uint64_t pairs, const OpConfig& cfg, std::uint64_t bytes_per_slot_x8 = 1) {
  if (cfg.integer_path == IntegerPath::never) return false;
  if (lo < -kSmallMax || hi > kSmallMax) return false;
  i128 width = hi - lo + 1;
  if (width > static_cast<i128>(cfg.fast_path_max_bits)) return false;
  if (static_cast<std::uint64_t>(width) / 8 * bytes_per_slot_x8 > cfg.memory_budget_bytes) return false;
  if (cfg.integer_path == IntegerPath::always) return true;
  // A sparse output range is cheaper to sort than to scan.
  return static_cast<std::uint64_t>(width) / 64 <= 4 * pairs + 65536;
}

std::int64_t iv(const ExactScalar& x) { return x.small_num(); }

std::array<i128, 2> product_range(const FiniteSet& a, const FiniteSet& b) {
  std::array<i128, 4> c = {static_cast<i128>(iv(a.min())) * iv(b.min()), static_cast<i128>(iv(a.min())) * iv(b.max()),
                           static_cast<i128>(iv(a.max())) * iv(b.min()), static_cast<i128>(iv(a.max())) * iv(b.max())};
  return {*std::min_element(c.begin(), c.end()), *std::max_element(c.begin(), c.end())};
}

std::optional<IntBits> int_sum(const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (!a.small_integers() || !b.small_integers()) return std::nullopt;
  i128 lo = static_cast<i128>(iv(a.min())) + iv(b.min());
  i128 hi = static_cast<i128>(iv(a.max())) + iv(b.max());
  std::uint64_t pairs = mul_sat(a.size(), b.size());
  if (!range_ok(lo, hi, pairs, cfg)) return std::nullopt;
  IntBits out{Bitset(static_cast<std::uint64_t>(hi - lo + 1)), static_cast<std::int64_t>(lo)};
  const FiniteSet& outer = a.size() <= b.size() ? a : b;
  const FiniteSet& inner = a.size() <= b.size() ? b : a;
  std::uint64_t inner_width = static_cast<std::uint64_t>(iv(inner.max()) - iv(inner.min())) + 1;
  if (out.bits.word_count() < inner.size()) {
    Bitset ib(inner_width);
    for (const auto& x : inner) ib.set(static_cast<std::uint64_t>(iv(x) - iv(inner.min())));
    for (const auto& x : outer) out.bits.or_shifted(ib, static_cast<std::uint64_t>(iv(x) - iv(outer.min())));
  } else {
    for (const auto& x : outer)
      for (const auto& y : inner) out.bits.set(static_cast<std::uint64_t>(static_cast<i128>(iv(x)) + iv(y) - lo));
  }
  return out;
}

std::optional<IntBits> int_product(const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (!a.small_integers() || !b.small_integers()) return std::nullopt;
  auto [lo, hi] = product_range(a, b);
  if (!range_ok(lo, hi, mul_sat(a.size(), b.size()), cfg)) return std::nullopt;
  IntBits out{Bitset(static_cast<std::uint64_t>(hi - lo + 1)), static_cast<std::int64_t>(lo)};
  for (const auto& x : a) {
    i128 xv = iv(x);
    for (const auto& y : b) out.bits.set(static_cast<std::uint64_t>(xv * iv(y) - lo));
  }
  return out;
}

std::optional<IntBits> int_binary(BinaryOp op, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  switch (op) {
    case BinaryOp::sum: return int_sum(a, b, cfg);
    case BinaryOp::difference:
      if (!b.small_integers()) return std::nullopt;
      return int_sum(a, b.negated(), cfg);
    case BinaryOp::product: return int_product(a, b, cfg);
    case BinaryOp::ratio: return std::nullopt;
  }
  return std::nullopt;
}

// AB + C over integers, built as (AB bitset) shifted by each c.
std::optional<IntBits> int_combine(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg) {
  if (!a.small_integers() || !b.small_integers() || !c.small_integers()) return std::nullopt;
  auto [plo, phi] = product_range(a, b);
  i128 lo = plo + iv(c.min());
  i128 hi = phi + iv(c.max());
  std::uint64_t triples = mul_sat(mul_sat(a.size(), b.size()), c.size());
  if (!range_ok(lo, hi, triples, cfg, 2)) return std::nullopt;
  auto ab = int_product(a, b, cfg);
  if (!ab) return std::nullopt;
  IntBits out{Bitset(static_cast<std::uint64_t>(hi - lo + 1)), static_cast<std::int64_t>(lo)};
  std::uint64_t ab_count = ab->bits.count();
  std::uint64_t shift_cost = c.size() * (out.bits.word_count() + 1);
  if (shift_cost <= mul_sat(ab_count, c.size())) {
    for (const auto& z : c) out.bits.or_shifted(ab->bits, static_cast<std::uint64_t>(iv(z) - iv(c.min())));
  } else {
    std::vector<std::uint64_t> positions;
    positions.reserve(ab_count);
    ab->bits.for_each_set([&](std::uint64_t i) { positions.push_back(i); });
    for (const auto& z : c) {
      std::uint64_t shift = static_cast<std::uint64_t>(iv(z) - iv(c.min()));
      for (auto p : positions) out.bits.set(p + shift);
    }
  }
  return out;
}

// Sum of squared representation counts via a dense counter array.
std::optional<std::uint64_t> int_energy(EnergyKind kind, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (!a.small_integers() || !b.small_integers()) return std::nullopt;
  i128 lo = 0, hi = 0;
  if (kind == EnergyKind::additive) {
    lo = static_cast<i128>(iv(a.min())) + iv(b.min());
    hi = static_cast<i128>(iv(a.max())) + iv(b.max());
  } else {
    std::tie(lo, hi) = std::pair{product_range(a, b)[0], product_range(a, b)[1]};
  }
  std::uint64_t pairs = mul_sat(a.size(), b.size());
  if (!range_ok(lo, hi, pairs, cfg, 32)) return std::nullopt;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& x : a) {
    i128 xv = iv(x);
    for (const auto& y : b) {
      i128 v = kind == EnergyKind::additive ? xv + iv(y) : xv * iv(y);
      ++counts[static_cast<std::size_t>(v - lo)];
    }
  }
  std::uint64_t e = 0;
  for (auto k : counts) e += static_cast<std::uint64_t>(k) * k;
  return e;
}

// Rational path
//
// Values are split into partitions by their residue modulo a 64-bit prime.
// The residue of a sum, difference, product or ratio follows from the
// residues of its operands, so a partition is chosen before the exact value
// is formed and every exact value is computed once per counting run.

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kPrime = 0xFFFFFFFFFFFFFFC5ULL;  // 2^64 - 59

u64 mulmod(u64 a, u64 b) { return static_cast<u64>(static_cast<u128>(a) * b % kPrime); }
u64 addmod(u64 a, u64 b) {
  u128 s = static_cast<u128>(a) + b;
  return static_cast<u64>(s >= kPrime ? s - kPrime : s);
}
u64 submod(u64 a, u64 b) { return a >= b ? a - b : static_cast<u64>(static_cast<u128>(a) + kPrime - b); }
u64 powmod(u64 b, u64 e) {
  u64 r = 1;
  for (; e; e >>= 1, b = mulmod(b, b))
    if (e & 1) r = mulmod(r, b);
  return r;
}
u64 invmod(u64 a) { return powmod(a, kPrime - 2); }

std::optional<u64> residue(const ExactScalar& x) {
  u64 n = 0, d = 0;
  if (x.is_small()) {
    i128 v = x.small_num() % static_cast<i128>(kPrime);
    n = static_cast<u64>(v < 0 ? v + kPrime : v);
    d = static_cast<u64>(x.small_den());
  } else {
    n = mpz_fdiv_ui(x.numerator().get_mpz_t(), kPrime);
    d = mpz_fdiv_ui(x.denominator().get_mpz_t(), kPrime);
  }
  if (d == 0) return std::nullopt;
  return mulmod(n, invmod(d));
}

using Residues = std::optional<std::vector<u64>>;

Residues residues(const FiniteSet& s, bool invert = false) {
  std::vector<u64> out;
  out.reserve(s.size());
  for (const auto& x : s) {
    auto r = residue(x);
    if (!r || (invert && *r == 0)) return std::nullopt;
    out.push_back(invert ? invmod(*r) : *r);
  }
  return out;
}

struct KeyedOp {
  BinaryOp op;
  u64 operator()(u64 a, u64 b) const {
    switch (op) {
      case BinaryOp::sum: return addmod(a, b);
      case BinaryOp::difference: return submod(a, b);
      case BinaryOp::product:
      case BinaryOp::ratio: return mulmod(a, b);  // ratio keys hold inverses of b
    }
    return 0;
  }
};

// Pairs (a[i], b[j]); partition by residue key when both residue lists are
// present, by hash of the value otherwise.
template <class Fn>
auto pair_generator(const FiniteSet& a, const FiniteSet& b, Fn fn, const Residues& ka, const Residues& kb, KeyedOp kop) {
  const bool keyed = ka && kb;
  return [&a, &b, fn, &ka, &kb, kop, keyed](std::size_t r0, std::size_t r1, u64 part, u64 parts, auto&& emit) {
    for (std::size_t i = r0; i < r1; ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (parts == 1) {
          emit(fn(a[i], b[j]));
        } else if (keyed) {
          if (detail::partition_of(kop((*ka)[i], (*kb)[j]), parts) == part) emit(fn(a[i], b[j]));
        } else {
          ExactScalar v = fn(a[i], b[j]);
          if (detail::partition_of(v.hash(), parts) == part) emit(std::move(v));
        }
      }
    }
  };
}

template <class Visitor>
decltype(auto) with_op(BinaryOp op, Visitor&& vis) {
  switch (op) {
    case BinaryOp::sum: return vis([](const ExactScalar& x, const ExactScalar& y) { return x + y; });
    case BinaryOp::difference: return vis([](const ExactScalar& x, const ExactScalar& y) { return x - y; });
    case BinaryOp::product: return vis([](const ExactScalar& x, const ExactScalar& y) { return x * y; });
    case BinaryOp::ratio: break;
  }
  return vis([](const ExactScalar& x, const ExactScalar& y) { return x / y; });
}

std::uint64_t rational_bytes(const FiniteSet& a, const FiniteSet& b) { return value_bytes(max_bits(a) + max_bits(b) + 1); }

std::uint64_t footprint(std::span<const ExactScalar> v) {
  std::uint64_t b = 0;
  for (const auto& x : v) b += x.footprint_bytes();
  return b;
}

// Distinct values of a pair generator: materialized when they fit `cap`,
// otherwise counted over `parts` partitions.
struct Collected {
  std::uint64_t size = 0;
  std::optional<std::vector<ExactScalar>> values;
};

template <class Gen>
Collected collect_or_count(std::size_t rows, std::uint64_t parts, std::uint64_t cap, unsigned workers, Gen&& gen,
                           bool count = true) {
  if (parts <= 1) {
    auto v = detail::collect_unique(rows, workers, gen);
    return {v.size(), std::move(v)};
  }
  if (auto v = detail::collect_unique_bounded(rows, workers, cap, gen)) return {v->size(), std::move(v)};
  if (!count) return {};
  return {detail::count_unique(rows, parts, workers, gen), std::nullopt};
}

Collected binary_collect(BinaryOp op, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg,
                         bool count = true) {
  const u64 parts = partitions_for(mul_sat(a.size(), b.size()), rational_bytes(a, b), 3, cfg.memory_budget_bytes);
  const Residues ka = parts > 1 ? residues(a) : std::nullopt;
  const Residues kb = parts > 1 ? residues(b, op == BinaryOp::ratio) : std::nullopt;
  return with_op(op, [&](auto fn) {
    return collect_or_count(a.size(), parts, cfg.memory_budget_bytes, cfg.workers,
                            pair_generator(a, b, fn, ka, kb, KeyedOp{op}), count);
  });
}

}  // namespace

FiniteSet binary_op(BinaryOp op, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (op == BinaryOp::ratio) require_ratio_divisor(b);
  if (auto bits = int_binary(op, a, b, cfg)) return bits->to_set();
  auto res = binary_collect(op, a, b, cfg, false);
  if (!res.values) throw Error(ErrorKind::ResourceLimit, std::string(to_string(op)) + " set does not fit the memory budget");
  return FiniteSet::from_sorted_unique(std::move(*res.values));
}

std::uint64_t binary_op_size(BinaryOp op, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (op == BinaryOp::ratio) require_ratio_divisor(b);
  if (auto bits = int_binary(op, a, b, cfg)) return bits->bits.count();
  return binary_collect(op, a, b, cfg).size;
}

namespace {

// Shared body of combine / combine_size; `want_set` asks for materialization.
CombineResult combine_impl(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg,
                           bool want_set) {
  if (auto bits = int_combine(a, b, c, cfg)) {
    std::uint64_t size = bits->bits.count();
    if (want_set && mul_sat(size, sizeof(ExactScalar)) <= cfg.memory_budget_bytes) return {size, bits->to_set()};
    if (want_set && !cfg.count_only_fallback)
      throw Error(ErrorKind::ResourceLimit, "AB+C does not fit the memory budget");
    return {size, std::nullopt};
  }
  const u64 budget = cfg.memory_budget_bytes;
  auto too_big = [&] {
    if (want_set && !cfg.count_only_fallback) throw Error(ErrorKind::ResourceLimit, "AB+C does not fit the memory budget");
  };
  const auto mul = [](const ExactScalar& x, const ExactScalar& y) { return x * y; };
  const auto add = [](const ExactScalar& x, const ExactScalar& y) { return x + y; };
  const Residues ka = residues(a), kb = residues(b), kc = residues(c);

  // AB first; it is often far smaller than |A||B|.
  std::optional<std::vector<ExactScalar>> ab_values;
  {
    const u64 parts = partitions_for(mul_sat(a.size(), b.size()), rational_bytes(a, b), 3, budget / 2);
    auto gen = pair_generator(a, b, mul, ka, kb, KeyedOp{BinaryOp::product});
    ab_values = parts <= 1 ? std::optional(detail::collect_unique(a.size(), cfg.workers, gen))
                           : detail::collect_unique_bounded(a.size(), cfg.workers, budget / 2, gen);
  }

  if (ab_values) {
    const FiniteSet ab = FiniteSet::from_sorted_unique(std::move(*ab_values));
    const Residues kab = residues(ab);
    const u64 left = budget - std::min(budget / 2, footprint(ab.elements()));
    const u64 parts = partitions_for(mul_sat(ab.size(), c.size()), rational_bytes(ab, c), 3, left);
    auto res = collect_or_count(ab.size(), parts, left, cfg.workers,
                                pair_generator(ab, c, add, kab, kc, KeyedOp{BinaryOp::sum}));
    if (res.values) {
      if (want_set) return {res.size, FiniteSet::from_sorted_unique(std::move(*res.values))};
      return {res.size, std::nullopt};
    }
    too_big();
    return {res.size, std::nullopt};
  }

  too_big();
  const bool keyed = ka && kb && kc;
  const u64 triples = mul_sat(mul_sat(a.size(), b.size()), c.size());
  const u64 bytes = value_bytes(max_bits(a) + max_bits(b) + max_bits(c) + 2);
  const u64 parts = std::max<u64>(2, partitions_for(triples, bytes, 3, budget));
  auto gen = [&](std::size_t r0, std::size_t r1, u64 part, u64 nparts, auto&& emit) {
    for (std::size_t i = r0; i < r1; ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const ExactScalar p = a[i] * b[j];
        const u64 kp = keyed ? mulmod((*ka)[i], (*kb)[j]) : 0;
        for (std::size_t l = 0; l < c.size(); ++l) {
          if (keyed) {
            if (detail::partition_of(addmod(kp, (*kc)[l]), nparts) == part) emit(p + c[l]);
          } else {
            ExactScalar v = p + c[l];
            if (detail::partition_of(v.hash(), nparts) == part) emit(std::move(v));
          }
        }
      }
    }
  };
  return {detail::count_unique(a.size(), parts, cfg.workers, gen), std::nullopt};
}

}  // namespace

CombineResult combine(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg) {
  return combine_impl(a, b, c, cfg, true);
}

std::uint64_t combine_size(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg) {
  return combine_impl(a, b, c, cfg, false).size;
}

std::uint64_t energy(EnergyKind kind, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (kind == EnergyKind::multiplicative && (a.contains_zero() || b.contains_zero()))
    throw Error(ErrorKind::ZeroInMultiplicativeEnergy, "multiplicative energy is undefined when 0 is present");
  if (auto e = int_energy(kind, a, b, cfg)) return *e;
  const BinaryOp op = kind == EnergyKind::additive ? BinaryOp::sum : BinaryOp::product;
  const u64 parts = partitions_for(mul_sat(a.size(), b.size()), rational_bytes(a, b), 2, cfg.memory_budget_bytes);
  const Residues ka = parts > 1 ? residues(a) : std::nullopt;
  const Residues kb = parts > 1 ? residues(b) : std::nullopt;
  return with_op(op, [&](auto fn) {
    return detail::sum_squared_multiplicities(a.size(), parts, cfg.workers, pair_generator(a, b, fn, ka, kb, KeyedOp{op}));
  });
}

bool EnergyReport::bounds_hold() const {
  ExactScalar ep(static_cast<std::int64_t>(e_plus));
  if (ep < sum_bound || ep < difference_bound) return false;
  if (e_mult) {
    ExactScalar em(static_cast<std::int64_t>(*e_mult));
    if ((product_bound && em < *product_bound) || (ratio_bound && em < *ratio_bound)) return false;
  }
  return true;
}

EnergyReport energy_bounds_report(const FiniteSet& a, const OpConfig& cfg) {
  EnergyReport r;
  r.size_a = r.size_b = a.size();
  mpz_class n(static_cast<unsigned long>(a.size()));
  mpz_class n3 = n * n * n;
  mpz_class n4 = n3 * n;
  auto frac = [](const mpz_class& num, std::uint64_t den) {
    return ExactScalar::from_mpq(mpq_class(num, mpz_class(static_cast<unsigned long>(den))));
  };
  r.e_plus = energy(EnergyKind::additive, a, a, cfg);
  r.k = frac(n3, r.e_plus);
  r.sum_bound = frac(n4, binary_op_size(BinaryOp::sum, a, a, cfg));
  r.difference_bound = frac(n4, binary_op_size(BinaryOp::difference, a, a, cfg));
  if (!a.contains_zero()) {
    r.e_mult = energy(EnergyKind::multiplicative, a, a, cfg);
    r.product_bound = frac(n4, binary_op_size(BinaryOp::product, a, a, cfg));
    r.ratio_bound = frac(n4, binary_op_size(BinaryOp::ratio, a, a, cfg));
  }
  return r;
}

ExactScalar ruzsa_ratio(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg) {
  auto size = [&](const FiniteSet& x, const FiniteSet& y) {
    return mpz_class(static_cast<unsigned long>(binary_op_size(BinaryOp::sum, x, y, cfg)));
  };
  mpz_class num = size(a, c) * size(b, c);
  mpz_class den = size(a, b) * mpz_class(static_cast<unsigned long>(c.size()));
  return ExactScalar::from_mpq(mpq_class(num, den));
}

DilateIdentity max_dilate_identity(const FiniteSet& a, const OpConfig& cfg) {
  if (!a.is_positive()) throw Error(ErrorKind::NotWellSpaced, "set must be positive");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] - a[i - 1] < ExactScalar(1))
      throw Error(ErrorKind::NotWellSpaced, "elements " + a[i - 1].to_string() + " and " + a[i].to_string() +
                                                " are closer than 1");
  DilateIdentity d;
  d.size = binary_op_size(BinaryOp::sum, a.scaled(a.max()), a, cfg);
  d.holds = d.size == static_cast<std::uint64_t>(a.size()) * a.size();
  return d;
}

}  // namespace sumprod
