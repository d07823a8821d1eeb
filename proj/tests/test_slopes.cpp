#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sumprod/error.hpp"
#include "sumprod/slopes.hpp"

using namespace sumprod;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

using QPoint = std::pair<mpq_class, mpq_class>;

// {(a + x c, l a + lp x c) : a in A_l, c in A} straight from the definition
std::set<QPoint> family_oracle(const oracle::QVec& a, const mpq_class& l, const mpq_class& lp, const mpq_class& x) {
  std::set<mpq_class> in(a.begin(), a.end());
  std::set<QPoint> out;
  for (const auto& p : a) {
    if (!in.count(mpq_class(l * p))) continue;
    for (const auto& c : a) out.emplace(mpq_class(p + x * c), mpq_class(l * p + lp * x * c));
  }
  return out;
}

std::uint64_t intersection_size(const std::set<QPoint>& u, const std::set<QPoint>& v) {
  std::uint64_t n = 0;
  for (const auto& p : u) n += v.count(p);
  return n;
}

}  // namespace

TEST(SlopeDecomposition, Examples) {
  auto d = slope_decomposition(FiniteSet::make({1, 2}));
  ASSERT_EQ(d.entries.size(), 3u);
  EXPECT_EQ(d.entries[0].lambda, ExactScalar(1, 2));
  EXPECT_EQ(d.entries[1].a_lambda, FiniteSet::make({1, 2}));
  EXPECT_EQ(d.entries[2].a_lambda, FiniteSet::make({1}));
  EXPECT_EQ(d.mass(), 4u);

  auto s = slope_decomposition(FiniteSet::make({7}));
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].lambda, ExactScalar(1));

  std::ostringstream os;
  write_decomposition(os, slope_decomposition(FiniteSet::make({1, 2, 4})));
  EXPECT_EQ(os.str(), "1/4 1\n1/2 2\n1 3\n2 2\n4 1\n");

  EXPECT_EQ(kind_of([] { slope_decomposition(FiniteSet::make({0, 1})); }), ErrorKind::SignRestriction);
  EXPECT_EQ(kind_of([] { slope_decomposition(FiniteSet::make({-2, 1})); }), ErrorKind::SignRestriction);
}

TEST(SlopeDecomposition, MatchesDefinition) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 60; ++it) {
    const bool rational = it % 2;
    auto a = rational ? oracle::random_rationals(rng, 1 + rng() % 30, 40, 8, true)
                      : oracle::random_integers(rng, 1 + rng() % 30, 1, 200);
    auto d = slope_decomposition(a);
    auto q = oracle::to_q(a);
    auto ratios = oracle::pairwise(oracle::Op::ratio, q, q);
    ASSERT_EQ(d.entries.size(), ratios.size());
    std::set<mpq_class> in(q.begin(), q.end());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      ASSERT_EQ(d.entries[i].lambda.to_mpq(), ratios[i]);
      oracle::QVec expect;
      for (const auto& x : q)
        if (in.count(mpq_class(ratios[i] * x))) expect.push_back(x);
      ASSERT_TRUE(oracle::equals(d.entries[i].a_lambda, expect));
    }
    ASSERT_EQ(d.mass(), a.size() * a.size());
  }
}

TEST(SlopeDecomposition, DilationInvariant) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 20; ++it) {
    auto a = oracle::random_integers(rng, 2 + rng() % 30, 1, 100);
    ExactScalar alpha(1 + static_cast<std::int64_t>(rng() % 20), 1 + static_cast<std::int64_t>(rng() % 20));
    auto d = slope_decomposition(a);
    auto e = slope_decomposition(a.scaled(alpha));
    ASSERT_EQ(d.entries.size(), e.entries.size());
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
      EXPECT_EQ(d.entries[i].lambda, e.entries[i].lambda);
      EXPECT_EQ(d.entries[i].a_lambda.size(), e.entries[i].a_lambda.size());
    }
  }
}

TEST(Dyadic, Examples) {
  auto lvl = dyadic_select(slope_decomposition(FiniteSet::make({1, 2, 4})));
  EXPECT_EQ(lvl.tau, 2u);
  EXPECT_EQ(lvl.mass, 7u);
  EXPECT_EQ(lvl.slopes, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_TRUE(lvl.guarantee_holds);
  ASSERT_TRUE(lvl.refined);

  auto tie = dyadic_select(slope_decomposition(FiniteSet::make({1, 2})));
  EXPECT_EQ(tie.tau, 2u);
  EXPECT_EQ(tie.mass, 2u);
  EXPECT_EQ(tie.level_masses, (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{1, 2}, {2, 2}}));

  EXPECT_EQ(kind_of([] { dyadic_select(slope_decomposition(FiniteSet::make({3}))); }), ErrorKind::Degenerate);
}

TEST(Dyadic, LevelsAndRefinementFollowDefinitions) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 30; ++it) {
    auto a = oracle::random_integers(rng, 2 + rng() % 40, 1, 120);
    auto d = slope_decomposition(a);
    auto lvl = dyadic_select(d);
    const auto n = a.size();
    for (auto i : lvl.slopes) {
      const auto s = d.entries[i].a_lambda.size();
      EXPECT_TRUE(lvl.tau <= s && s < 2 * lvl.tau);
    }
    for (auto [tau, mass] : lvl.level_masses) {
      EXPECT_LE(mass, lvl.mass);
      if (mass == lvl.mass) EXPECT_LE(tau, lvl.tau);
    }
    EXPECT_TRUE(lvl.guarantee_holds);
    for (auto i : lvl.refined->slopes) {
      const auto prod = binary_op_size(BinaryOp::product, a, d.entries[i].a_lambda);
      EXPECT_LE(lvl.refined->t0 * n, prod);
      EXPECT_LT(prod, 2 * lvl.refined->t0 * n);
    }
  }
}

TEST(LinePairSum, Example) {
  auto d = slope_decomposition(FiniteSet::make({1, 2}));
  auto pts = line_pair_sum(d, ExactScalar(1), ExactScalar(2), ExactScalar(1));
  std::vector<PlanePoint> expect{{2, 3}, {3, 4}, {3, 5}, {4, 6}};
  EXPECT_EQ(pts, expect);
  EXPECT_EQ(kind_of([&] { line_pair_sum(d, ExactScalar(1), ExactScalar(1), ExactScalar(1)); }), ErrorKind::InvalidPair);
  EXPECT_EQ(kind_of([&] { line_pair_sum(d, ExactScalar(1), ExactScalar(3), ExactScalar(1)); }), ErrorKind::InvalidPair);
  EXPECT_EQ(kind_of([&] { line_pair_sum(d, ExactScalar(1), ExactScalar(2), ExactScalar(2)); }), ErrorKind::InvalidPair);
}

TEST(LinePairSum, SingletonLines) {
  auto d = slope_decomposition(FiniteSet::make({5}));
  ASSERT_EQ(d.entries.size(), 1u);
  auto e = slope_decomposition(FiniteSet::make({1, 3}));
  auto pts = line_pair_sum(e, ExactScalar(1, 3), ExactScalar(3), ExactScalar(1));
  EXPECT_EQ(pts.size(), 2u);
}

TEST(LinePairSum, MatchesDefinitionAndLiesBetween) {
  std::mt19937_64 rng(6);
  for (int it = 0; it < 10; ++it) {
    auto a = oracle::random_rationals(rng, 2 + rng() % 6, 12, 4, true);
    auto d = slope_decomposition(a);
    auto q = oracle::to_q(a);
    for (std::size_t i = 0; i < d.entries.size(); ++i)
      for (std::size_t j = 0; j < d.entries.size(); ++j) {
        if (i == j) continue;
        const auto& l = d.entries[i].lambda;
        const auto& lp = d.entries[j].lambda;
        for (const auto& x : d.entries[j].a_lambda) {
          auto pts = line_pair_sum(d, l, lp, x);
          auto expect = family_oracle(q, l.to_mpq(), lp.to_mpq(), x.to_mpq());
          ASSERT_EQ(pts.size(), expect.size());
          ASSERT_EQ(pts.size(), d.entries[i].a_lambda.size() * a.size());
          for (const auto& p : pts) {
            ASSERT_TRUE(expect.count({p.x.to_mpq(), p.y.to_mpq()}));
            const ExactScalar s = p.y / p.x;
            ASSERT_TRUE((l < s && s < lp) || (lp < s && s < l));
          }
        }
      }
  }
}

TEST(BalogChain, Examples) {
  auto c = balog_chain(FiniteSet::make({1, 2}));
  EXPECT_EQ(c.lhs, 25u);
  EXPECT_EQ(c.rhs, 7u);
  EXPECT_TRUE(c.holds);
  auto s = balog_chain(FiniteSet::make({4}));
  EXPECT_EQ(s.lhs, 1u);
  EXPECT_EQ(s.rhs, 0u);
  EXPECT_TRUE(s.holds);
}

TEST(Collision, DisjointWedgesAreEmpty) {
  auto d = slope_decomposition(FiniteSet::make({1, 2, 3, 4, 6}));
  auto fp = FixedPoints::minimal(d);
  const auto k = d.entries.size();
  auto r = collision_count(d, 0, 1, k - 2, k - 1, fp);
  EXPECT_EQ(r.e, 0u);
  EXPECT_TRUE(r.holds);
}

TEST(Collision, SameSecondSlopeInstance) {
  auto a = FiniteSet::make({1, 2, 3, 4, 6});
  auto d = slope_decomposition(a);
  auto fp = FixedPoints::minimal(d);
  auto q = oracle::to_q(a);
  const auto lam = [&](std::size_t l) { return d.entries[l].lambda.to_mpq(); };
  const auto k = d.entries.size();
  std::uint64_t nonzero = 0;
  for (std::size_t l1 = 0; l1 < k; ++l1)
    for (std::size_t l2 = 0; l2 < k; ++l2)
      for (std::size_t l3 = 0; l3 < k; ++l3) {
        if (l1 == l2 || l3 == l2 || l1 == l3) continue;
        auto r = collision_count(d, l1, l2, l3, l2, fp);
        ASSERT_TRUE(r.same_second);
        ASSERT_EQ(r.weight, a.size());
        auto f1 = family_oracle(q, lam(l1), lam(l2), fp.x[l2].to_mpq());
        auto f2 = family_oracle(q, lam(l3), lam(l2), fp.x[l2].to_mpq());
        ASSERT_EQ(r.e, intersection_size(f1, f2));
        ASSERT_EQ(r.alpha, (d.entries[l1].lambda - d.entries[l3].lambda) /
                               (fp.x[l2] * (d.entries[l3].lambda - d.entries[l2].lambda)));
        ASSERT_TRUE(r.holds);
        nonzero += r.e > 0;
      }
  EXPECT_GT(nonzero, 0u);
}

TEST(Collision, InvalidQuadruples) {
  auto d = slope_decomposition(FiniteSet::make({1, 2, 3}));
  auto fp = FixedPoints::minimal(d);
  EXPECT_EQ(kind_of([&] { collision_count(d, 0, 0, 1, 2, fp); }), ErrorKind::InvalidQuadruple);
  EXPECT_EQ(kind_of([&] { collision_count(d, 0, 1, 0, 1, fp); }), ErrorKind::InvalidQuadruple);
  EXPECT_EQ(kind_of([&] { collision_count(d, 0, 1, 1, 2, fp); }), ErrorKind::InvalidQuadruple);
  EXPECT_EQ(kind_of([&] { collision_count(d, 0, 1, 2, 99, fp); }), ErrorKind::InvalidQuadruple);
}

TEST(Collision, MatchesOracleOnAllQuadruples) {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 6; ++it) {
    auto a = oracle::random_integers(rng, 3 + rng() % 3, 1, 20);
    auto d = slope_decomposition(a);
    auto fp = FixedPoints::minimal(d);
    auto q = oracle::to_q(a);
    const auto k = d.entries.size();
    for (std::size_t l1 = 0; l1 < k; ++l1)
      for (std::size_t l2 = 0; l2 < k; ++l2)
        for (std::size_t l3 = 0; l3 < k; ++l3)
          for (std::size_t l4 = 0; l4 < k; ++l4) {
            if (l1 == l2 || l3 == l4 || l1 == l4 || l3 == l2 || (l1 == l3 && l2 == l4)) continue;
            auto r = collision_count(d, l1, l2, l3, l4, fp);
            const auto lam = [&](std::size_t l) { return d.entries[l].lambda.to_mpq(); };
            auto f1 = family_oracle(q, lam(l1), lam(l2), fp.x[l2].to_mpq());
            auto f2 = family_oracle(q, lam(l3), lam(l4), fp.x[l4].to_mpq());
            ASSERT_EQ(r.e, intersection_size(f1, f2));
            ASSERT_TRUE(r.holds);
          }
  }
}

TEST(Cluster, Examples) {
  auto d = slope_decomposition(FiniteSet::make({1, 2, 4}));
  auto cs = cluster_mu(d, 1);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].main_term, 6u);
  EXPECT_EQ(cs[0].mu_actual, 26u);
  EXPECT_TRUE(cs[0].holds);
  EXPECT_EQ(kind_of([&] { cluster_mu(d, 2); }), ErrorKind::InvalidClusterWidth);
  EXPECT_EQ(kind_of([&] { cluster_mu(d, 0); }), ErrorKind::InvalidClusterWidth);
}

TEST(Cluster, MuMatchesBruteForceAndCollisionSumMatchesDirect) {
  std::mt19937_64 rng(10);
  for (int it = 0; it < 8; ++it) {
    auto a = oracle::random_integers(rng, 3 + rng() % 6, 1, 20);
    auto d = slope_decomposition(a);
    auto lvl = dyadic_select(d);
    auto q = oracle::to_q(a);
    auto c = oracle::triple(q, q, q);
    auto fp = FixedPoints::minimal(d);
    oracle::QVec slopes;  // slope of every point of (AA+A)^2, with repetition
    for (const auto& u : c)
      for (const auto& v : c) slopes.push_back(v / u);
    std::sort(slopes.begin(), slopes.end());
    for (std::uint64_t m = 1; 2 * m <= lvl.slopes.size(); ++m) {
      for (const auto& cd : cluster_mu(d, m)) {
        const mpq_class lo = cd.lambda_low.to_mpq(), hi = cd.lambda_high.to_mpq();
        const auto mu = std::lower_bound(slopes.begin(), slopes.end(), hi) -
                        std::upper_bound(slopes.begin(), slopes.end(), lo);
        ASSERT_EQ(cd.mu_actual, static_cast<std::uint64_t>(mu));
        ASSERT_EQ(cd.collision_sum, cluster_collision_sum_direct(d, cd, fp));
        ASSERT_TRUE(cd.holds);
      }
    }
  }
}

TEST(BigRatio, Example) {
  auto a = FiniteSet::make({1, 2});
  auto r = bigratio_diagnostic(a, a);
  EXPECT_EQ(r.size_ax_plus_ax, 6u);
  EXPECT_EQ(r.size_ratio_set, 3u);
  EXPECT_EQ(r.e_plus_x, 6u);
  EXPECT_EQ(r.k, ExactScalar(8, 6));
  EXPECT_NEAR(r.ratio_plain, 6 / (2 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(r.ratio_k, r.ratio_plain / std::pow(4.0 / 3.0, 0.125), 1e-12);
  auto s = bigratio_diagnostic(a, FiniteSet::make({3}));
  EXPECT_EQ(s.k, ExactScalar(1));
  EXPECT_EQ(kind_of([] { bigratio_diagnostic(FiniteSet::make({-1}), FiniteSet::make({1})); }),
            ErrorKind::SignRestriction);
}
