#include "sumprod/slopes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>

#include <gmpxx.h>

#include "sumprod/error.hpp"

namespace sumprod {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct IntKey {
  u64 p;
  u64 q;
  std::uint32_t xi;
};

std::vector<SlopeEntry> group_entries(const FiniteSet& a, const std::vector<std::pair<ExactScalar, std::vector<std::uint32_t>>>& groups) {
  std::vector<SlopeEntry> out;
  out.reserve(groups.size());
  for (const auto& [lam, idx] : groups) {
    std::vector<ExactScalar> xs;
    xs.reserve(idx.size());
    for (auto i : idx) xs.push_back(a[i]);
    out.push_back({lam, FiniteSet::from_sorted_unique(std::move(xs))});
  }
  return out;
}

std::vector<SlopeEntry> decompose_integers(const FiniteSet& a) {
  const std::size_t n = a.size();
  std::vector<u64> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<u64>(a[i].small_num());
  std::vector<IntKey> keys;
  keys.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u64 g = std::gcd(v[i], v[j]);
      keys.push_back({v[j] / g, v[i] / g, static_cast<std::uint32_t>(i)});
    }
  }
  std::sort(keys.begin(), keys.end(), [](const IntKey& l, const IntKey& r) {
    u128 a1 = static_cast<u128>(l.p) * r.q;
    u128 b1 = static_cast<u128>(r.p) * l.q;
    if (a1 != b1) return a1 < b1;
    return l.xi < r.xi;
  });
  std::vector<std::pair<ExactScalar, std::vector<std::uint32_t>>> groups;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    std::vector<std::uint32_t> idx;
    while (j < keys.size() && keys[j].p == keys[i].p && keys[j].q == keys[i].q) idx.push_back(keys[j++].xi);
    groups.emplace_back(ExactScalar(static_cast<std::int64_t>(keys[i].p), static_cast<std::int64_t>(keys[i].q)),
                        std::move(idx));
    i = j;
  }
  return group_entries(a, groups);
}

std::vector<SlopeEntry> decompose_rationals(const FiniteSet& a) {
  const std::size_t n = a.size();
  struct Key {
    std::size_t h;
    ExactScalar v;
    std::uint32_t xi;
  };
  std::vector<Key> keys;
  keys.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ExactScalar v = a[j] / a[i];
      const std::size_t h = v.hash();
      keys.push_back({h, std::move(v), static_cast<std::uint32_t>(i)});
    }
  // Group by hash first; exact comparisons only happen on hash ties.
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    if (x.h != y.h) return x.h < y.h;
    if (x.v != y.v) return x.v < y.v;
    return x.xi < y.xi;
  });
  std::vector<std::pair<ExactScalar, std::vector<std::uint32_t>>> groups;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    std::vector<std::uint32_t> idx;
    while (j < keys.size() && keys[j].h == keys[i].h && keys[j].v == keys[i].v) idx.push_back(keys[j++].xi);
    groups.emplace_back(std::move(keys[i].v), std::move(idx));
    i = j;
  }
  keys = {};
  std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return group_entries(a, groups);
}

std::uint64_t product_size(const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg) {
  if (b.size() == 1) return a.size();
  return binary_op_size(BinaryOp::product, a, b, cfg);
}

// Points (x, lambda x) + (fx, lambda' fx) c for x in A_lambda, c in A.
void append_family(std::vector<PlanePoint>& out, const SlopeDecomposition& d, std::size_t l, std::size_t lp,
                   const ExactScalar& fx) {
  const auto& e = d.entries[l];
  const ExactScalar fy = d.entries[lp].lambda * fx;
  for (const auto& x : e.a_lambda) {
    const ExactScalar y = e.lambda * x;
    for (const auto& c : d.base) out.push_back({x + fx * c, y + fy * c});
  }
}

std::vector<PlanePoint> family(const SlopeDecomposition& d, std::size_t l, std::size_t lp, const ExactScalar& fx) {
  std::vector<PlanePoint> pts;
  pts.reserve(d.entries[l].a_lambda.size() * d.base.size());
  append_family(pts, d, l, lp, fx);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

std::uint64_t SlopeDecomposition::mass() const {
  u64 m = 0;
  for (const auto& e : entries) m += e.a_lambda.size();
  return m;
}

std::size_t SlopeDecomposition::index_of(const ExactScalar& lambda) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), lambda,
                             [](const SlopeEntry& e, const ExactScalar& v) { return e.lambda < v; });
  if (it == entries.end() || it->lambda != lambda) return entries.size();
  return static_cast<std::size_t>(it - entries.begin());
}

SlopeDecomposition slope_decomposition(const FiniteSet& a) {
  if (!a.is_positive()) throw Error(ErrorKind::SignRestriction, "slope decomposition needs a positive set");
  SlopeDecomposition d{a, {}};
  d.entries = a.small_integers() ? decompose_integers(a) : decompose_rationals(a);
  return d;
}

void write_decomposition(std::ostream& os, const SlopeDecomposition& d) {
  for (const auto& e : d.entries) os << e.lambda.to_string() << ' ' << e.a_lambda.size() << '\n';
}

DyadicLevel dyadic_select(const SlopeDecomposition& d, const DyadicOptions& opt) {
  const u64 n = d.base.size();
  if (n < 2) throw Error(ErrorKind::Degenerate, "dyadic selection needs at least two elements");

  std::vector<u64> mass_by_level(65, 0);
  for (const auto& e : d.entries) mass_by_level[std::bit_width(e.a_lambda.size()) - 1] += e.a_lambda.size();

  DyadicLevel lvl;
  unsigned best = 0;
  for (unsigned k = 0; k < mass_by_level.size(); ++k) {
    if (mass_by_level[k] == 0) continue;
    lvl.level_masses.emplace_back(u64{1} << k, mass_by_level[k]);
    if (mass_by_level[k] >= mass_by_level[best]) best = k;
  }
  lvl.tau = u64{1} << best;
  lvl.mass = mass_by_level[best];
  for (std::size_t i = 0; i < d.entries.size(); ++i)
    if (std::bit_floor(d.entries[i].a_lambda.size()) == lvl.tau) lvl.slopes.push_back(i);
  lvl.guarantee_holds = static_cast<long double>(lvl.mass) * 2.0L * std::log2(static_cast<long double>(n)) >=
                        static_cast<long double>(n) * static_cast<long double>(n);

  if (opt.refine) {
    std::vector<std::vector<std::size_t>> by_t(65);
    for (auto i : lvl.slopes) {
      const u64 s = product_size(d.base, d.entries[i].a_lambda, opt.ops);
      by_t[std::bit_width(s / n) - 1].push_back(i);
    }
    std::size_t pick = 0;
    for (std::size_t k = 1; k < by_t.size(); ++k)
      if (by_t[k].size() > by_t[pick].size()) pick = k;
    lvl.refined = RefinedLevel{u64{1} << pick, std::move(by_t[pick])};
  }
  return lvl;
}

std::vector<PlanePoint> line_pair_sum(const SlopeDecomposition& d, const ExactScalar& lambda,
                                      const ExactScalar& lambda_prime, const ExactScalar& fixed_x) {
  if (lambda == lambda_prime) throw Error(ErrorKind::InvalidPair, "slopes must differ");
  const std::size_t l = d.index_of(lambda);
  const std::size_t lp = d.index_of(lambda_prime);
  if (l == d.entries.size() || lp == d.entries.size())
    throw Error(ErrorKind::InvalidPair, "slope is not a ratio of the base set");
  if (!d.entries[lp].a_lambda.contains(fixed_x))
    throw Error(ErrorKind::InvalidPair, "fixed point " + fixed_x.to_string() + " is not on line " + lambda_prime.to_string());
  auto pts = family(d, l, lp, fixed_x);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

BalogChain balog_chain(const FiniteSet& a, const OpConfig& cfg) {
  const auto d = slope_decomposition(a);
  BalogChain out;
  const u64 s = combine_size(a, a, a, cfg);
  out.lhs = s * s;
  for (std::size_t i = 0; i + 1 < d.entries.size(); ++i)
    out.rhs += d.entries[i].a_lambda.size() * product_size(a, d.entries[i + 1].a_lambda, cfg);
  out.holds = out.lhs >= out.rhs;
  return out;
}

FixedPoints FixedPoints::minimal(const SlopeDecomposition& d) {
  FixedPoints fp;
  fp.x.reserve(d.entries.size());
  for (const auto& e : d.entries) fp.x.push_back(e.a_lambda.min());
  return fp;
}

namespace {

u64 family_overlap(const SlopeDecomposition& d, std::size_t l1, std::size_t l2, std::size_t l3, std::size_t l4,
                   const FixedPoints& fp) {
  const auto f1 = family(d, l1, l2, fp.x[l2]);
  const auto f2 = family(d, l3, l4, fp.x[l4]);
  u64 e = 0;
  std::size_t i = 0, j = 0;
  while (i < f1.size() && j < f2.size()) {
    if (f1[i] < f2[j]) {
      ++i;
    } else if (f2[j] < f1[i]) {
      ++j;
    } else {
      ++e;
      ++i;
      ++j;
    }
  }
  return e;
}

}  // namespace

CollisionCount collision_count(const SlopeDecomposition& d, std::size_t l1, std::size_t l2, std::size_t l3,
                               std::size_t l4, const FixedPoints& fp, const OpConfig& cfg) {
  const std::size_t k = d.entries.size();
  if (l1 >= k || l2 >= k || l3 >= k || l4 >= k) throw Error(ErrorKind::InvalidQuadruple, "slope index out of range");
  if (l1 == l2 || l3 == l4 || l1 == l4 || l3 == l2 || (l1 == l3 && l2 == l4))
    throw Error(ErrorKind::InvalidQuadruple, "slopes do not form a valid quadruple");
  if (fp.x.size() != k) throw Error(ErrorKind::InvalidQuadruple, "fixed points do not match the decomposition");
  for (auto l : {l2, l4})
    if (!d.entries[l].a_lambda.contains(fp.x[l]))
      throw Error(ErrorKind::InvalidQuadruple, "fixed point is not on its line");

  CollisionCount out;
  out.e = family_overlap(d, l1, l2, l3, l4, fp);

  const auto& lam = [&](std::size_t l) -> const ExactScalar& { return d.entries[l].lambda; };
  const ExactScalar& a2 = fp.x[l2];
  out.same_second = l2 == l4;
  if (!out.same_second) {
    out.alpha = (lam(l4) - lam(l3)) / (a2 * (lam(l2) - lam(l4)));
    out.weight = d.entries[l1].a_lambda.size();
    out.energy = energy(EnergyKind::additive, d.base, d.entries[l3].a_lambda.scaled(out.alpha), cfg);
  } else {
    out.alpha = (lam(l1) - lam(l3)) / (a2 * (lam(l3) - lam(l2)));
    out.weight = d.base.size();
    out.energy = energy(EnergyKind::additive, d.base, d.entries[l1].a_lambda.scaled(out.alpha), cfg);
  }
  const mpz_class rhs = mpz_class(static_cast<unsigned long>(out.weight)) * static_cast<unsigned long>(out.energy);
  const mpz_class lhs = mpz_class(static_cast<unsigned long>(out.e)) * static_cast<unsigned long>(out.e);
  out.holds = lhs <= rhs;
  out.bound = std::sqrt(static_cast<double>(out.weight) * static_cast<double>(out.energy));
  return out;
}

std::vector<ClusterDiagnostic> cluster_mu(const SlopeDecomposition& d, std::uint64_t m, const ClusterOptions& opt) {
  DyadicOptions dopt;
  dopt.refine = opt.use_refined;
  dopt.ops = opt.ops;
  const auto lvl = dyadic_select(d, dopt);
  const auto& s = opt.use_refined ? lvl.refined->slopes : lvl.slopes;
  if (m < 1 || 2 * m > s.size())
    throw Error(ErrorKind::InvalidClusterWidth,
                "need 2 <= 2M <= " + std::to_string(s.size()) + ", got M = " + std::to_string(m));
  const FixedPoints fp = opt.fixed_points ? *opt.fixed_points : FixedPoints::minimal(d);
  if (fp.x.size() != d.entries.size())
    throw Error(ErrorKind::InvalidClusterWidth, "fixed points do not match the decomposition");

  const auto aa_plus_a = combine(d.base, d.base, d.base, opt.ops);
  if (!aa_plus_a.set) throw Error(ErrorKind::ResourceLimit, "AA+A does not fit the memory budget");
  const auto& c = *aa_plus_a.set;
  const u64 n = d.base.size();

  std::vector<ClusterDiagnostic> out;
  for (std::size_t start = 0; start + 2 * m <= s.size(); start += 2 * m) {
    ClusterDiagnostic cd;
    cd.m = m;
    cd.cluster_index = out.size();
    cd.slopes.assign(s.begin() + static_cast<std::ptrdiff_t>(start), s.begin() + static_cast<std::ptrdiff_t>(start + 2 * m));
    cd.lambda_low = d.entries[cd.slopes.front()].lambda;
    cd.lambda_high = d.entries[cd.slopes.back()].lambda;
    cd.tau = lvl.tau;
    cd.main_term = lvl.tau * n * m * m;
    for (auto i : cd.slopes) {
      if (!d.entries[i].a_lambda.contains(fp.x[i]))
        throw Error(ErrorKind::InvalidClusterWidth, "fixed point is not on its line");
      cd.fixed_x.push_back(fp.x[i]);
    }

    for (const auto& u : c) {
      const ExactScalar lo = cd.lambda_low * u;
      const ExactScalar hi = cd.lambda_high * u;
      auto b = std::upper_bound(c.begin(), c.end(), lo);
      auto e = std::lower_bound(c.begin(), c.end(), hi);
      if (b < e) cd.mu_actual += static_cast<u64>(e - b);
    }

    // Each point z lying in c(z) of the M^2 families contributes
    // c(z)(c(z) - 1) ordered pairs of distinct families.
    std::vector<PlanePoint> pts;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = m; j < 2 * m; ++j) append_family(pts, d, cd.slopes[i], cd.slopes[j], fp.x[cd.slopes[j]]);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i < pts.size();) {
      std::size_t j = i + 1;
      while (j < pts.size() && pts[j] == pts[i]) ++j;
      const u64 mult = j - i;
      cd.collision_sum += mult * (mult - 1);
      i = j;
    }
    cd.holds = cd.mu_actual + cd.collision_sum >= cd.main_term;
    out.push_back(std::move(cd));
  }
  return out;
}

std::uint64_t cluster_collision_sum_direct(const SlopeDecomposition& d, const ClusterDiagnostic& c,
                                           const FixedPoints& fp) {
  const std::size_t m = c.m;
  u64 total = 0;
  for (std::size_t i1 = 0; i1 < m; ++i1)
    for (std::size_t i3 = 0; i3 < m; ++i3)
      for (std::size_t i2 = m; i2 < 2 * m; ++i2)
        for (std::size_t i4 = m; i4 < 2 * m; ++i4) {
          if (i1 == i3 && i2 == i4) continue;
          total += family_overlap(d, c.slopes[i1], c.slopes[i2], c.slopes[i3], c.slopes[i4], fp);
        }
  return total;
}

BigRatioDiagnostic bigratio_diagnostic(const FiniteSet& a, const FiniteSet& x, const OpConfig& cfg) {
  if (!a.is_positive() || !x.is_positive())
    throw Error(ErrorKind::SignRestriction, "diagnostic needs positive sets");
  BigRatioDiagnostic out;
  const auto ax = binary_op(BinaryOp::product, a, x, cfg);
  out.size_ax_plus_ax = binary_op_size(BinaryOp::sum, ax, ax, cfg);
  out.size_ratio_set = binary_op_size(BinaryOp::ratio, a, a, cfg);
  out.size_x = x.size();
  out.e_plus_x = energy(EnergyKind::additive, x, x, cfg);
  const auto sx = static_cast<std::int64_t>(out.size_x);
  out.k = ExactScalar(sx * sx * sx, static_cast<std::int64_t>(out.e_plus_x));
  out.ratio_plain = static_cast<double>(out.size_ax_plus_ax) /
                    (static_cast<double>(out.size_x) * std::sqrt(static_cast<double>(out.size_ratio_set)));
  out.ratio_k = out.ratio_plain / std::pow(out.k.to_double(), 0.125);
  return out;
}

}  // namespace sumprod
