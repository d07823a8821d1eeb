#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sumprod/error.hpp"
#include "sumprod/exact_scalar.hpp"
#include "sumprod/finite_set.hpp"
#include "sumprod/set_io.hpp"

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

}  // namespace

TEST(ExactScalar, ReducesToCanonicalForm) {
  ExactScalar x(6, -4);
  EXPECT_EQ(x.small_num(), -3);
  EXPECT_EQ(x.small_den(), 2);
  EXPECT_EQ(x.to_string(), "-3/2");
  EXPECT_EQ(ExactScalar(0, -7).to_string(), "0");
  EXPECT_EQ(ExactScalar(0, -7).small_den(), 1);
}

TEST(ExactScalar, DivisorZero) {
  EXPECT_EQ(kind_of([] { ExactScalar(1, 0); }), ErrorKind::DivisorZero);
  EXPECT_EQ(kind_of([] { (void)ExactScalar(0).reciprocal(); }), ErrorKind::DivisorZero);
  EXPECT_EQ(kind_of([] { (void)(ExactScalar(3) / ExactScalar(0)); }), ErrorKind::DivisorZero);
}

TEST(ExactScalar, Parse) {
  EXPECT_EQ(ExactScalar::parse("  -12/8 "), ExactScalar(-3, 2));
  EXPECT_EQ(ExactScalar::parse("+7"), ExactScalar(7));
  EXPECT_EQ(ExactScalar::parse("123456789012345678901234567890").to_string(), "123456789012345678901234567890");
  EXPECT_EQ(kind_of([] { ExactScalar::parse("1/0"); }), ErrorKind::DivisorZero);
  EXPECT_EQ(kind_of([] { ExactScalar::parse("1.5"); }), ErrorKind::InputFormat);
  EXPECT_EQ(kind_of([] { ExactScalar::parse("1,000"); }), ErrorKind::InputFormat);
  EXPECT_EQ(kind_of([] { ExactScalar::parse("1/-2"); }), ErrorKind::InputFormat);
  EXPECT_EQ(kind_of([] { ExactScalar::parse(""); }), ErrorKind::InputFormat);
}

TEST(ExactScalar, OverflowPromotesAndDemotes) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  ExactScalar x(big);
  ExactScalar y = x + ExactScalar(1);
  EXPECT_FALSE(y.is_small());
  EXPECT_EQ(y.to_mpq(), mpq_class(mpz_class("9223372036854775808")));
  ExactScalar back = y - ExactScalar(1);
  EXPECT_TRUE(back.is_small());
  EXPECT_EQ(back, x);
  EXPECT_EQ(back.hash(), x.hash());
  ExactScalar neg = -x - ExactScalar(1);  // INT64_MIN is kept out of the inline form
  EXPECT_FALSE(neg.is_small());
  EXPECT_LT(neg, -x);
}

TEST(ExactScalar, ArithmeticMatchesGmp) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
  for (int i = 0; i < 20000; ++i) {
    std::int64_t a = d(rng), b = d(rng) | 1, c = d(rng), e = d(rng) | 1;
    ExactScalar x(a, b < 0 ? -b : b), y(c, e < 0 ? -e : e);
    mpq_class qx = x.to_mpq(), qy = y.to_mpq();
    ASSERT_EQ((x + y).to_mpq(), mpq_class(qx + qy));
    ASSERT_EQ((x - y).to_mpq(), mpq_class(qx - qy));
    ASSERT_EQ((x * y).to_mpq(), mpq_class(qx * qy));
    if (!y.is_zero()) ASSERT_EQ((x / y).to_mpq(), mpq_class(qx / qy));
    ASSERT_EQ(x < y, qx < qy);
    ASSERT_EQ(x == y, qx == qy);
    // results are canonical: a value that fits inline is stored inline
    ExactScalar p = x * y;
    const mpq_class qp = p.to_mpq();
    bool fits = mpz_fits_slong_p(qp.get_num_mpz_t()) && mpz_fits_slong_p(qp.get_den_mpz_t()) &&
                qp.get_num() != mpz_class(std::numeric_limits<long>::min());
    ASSERT_EQ(p.is_small(), fits);
  }
}

TEST(ExactScalar, TotalOrderAcrossRepresentations) {
  ExactScalar huge = ExactScalar::parse("100000000000000000000000");
  ExactScalar tiny = ExactScalar::parse("1/100000000000000000000000");
  EXPECT_LT(ExactScalar(-1), tiny);
  EXPECT_LT(tiny, ExactScalar(1, 1000));
  EXPECT_LT(ExactScalar(1000), huge);
  EXPECT_LT(-huge, ExactScalar(-5));
  EXPECT_EQ(huge * tiny, ExactScalar(1));
  EXPECT_TRUE((huge * tiny).is_small());
}

TEST(FiniteSet, MakeSortsAndDeduplicates) {
  auto s = FiniteSet::make({3, 1, 2, 2});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], ExactScalar(1));
  EXPECT_EQ(s[2], ExactScalar(3));
  EXPECT_EQ(s.sign_summary(), SignSummary::all_positive);
  EXPECT_EQ(FiniteSet::make({-1, 1}).sign_summary(), SignSummary::mixed);
  EXPECT_EQ(FiniteSet::make({0}).sign_summary(), SignSummary::contains_zero);
  EXPECT_EQ(FiniteSet::make({-3, 0, 5}).sign_summary(), SignSummary::contains_zero);
  EXPECT_EQ(FiniteSet::make({-3, -1}).sign_summary(), SignSummary::all_negative);
  EXPECT_EQ(kind_of([] { FiniteSet::make(std::vector<ExactScalar>{}); }), ErrorKind::EmptySet);
}

TEST(FiniteSet, ScaledAndLookup) {
  auto s = FiniteSet::make({1, 2, 4});
  auto t = s.scaled(ExactScalar(-1, 2));
  EXPECT_EQ(t, FiniteSet::make(std::vector<ExactScalar>{ExactScalar(-2), ExactScalar(-1), ExactScalar(-1, 2)}));
  EXPECT_EQ(s.scaled(ExactScalar(0)), FiniteSet::make({0}));
  EXPECT_TRUE(s.contains(ExactScalar(4)));
  EXPECT_FALSE(s.contains(ExactScalar(3)));
  EXPECT_EQ(s.index_of(ExactScalar(2)), 1u);
  EXPECT_EQ(s.index_of(ExactScalar(5)), 3u);
  EXPECT_TRUE(s.small_integers());
  EXPECT_FALSE(t.small_integers());
}

TEST(SetIo, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto s = oracle::random_rationals(rng, 1 + i, 1000, 50);
    std::vector<ExactScalar> v(s.begin(), s.end());
    v.push_back(ExactScalar::parse("-98765432109876543210/7"));
    auto t = FiniteSet::make(v);
    std::stringstream ss;
    write_set(ss, t);
    EXPECT_EQ(read_set(ss, "mem"), t);
  }
}

TEST(SetIo, CommentsAndErrors) {
  std::istringstream ok("# header\n3\n\n1/2\n  -4  \n");
  EXPECT_EQ(read_set(ok, "ok"), FiniteSet::make(std::vector<ExactScalar>{ExactScalar(-4), ExactScalar(1, 2), ExactScalar(3)}));
  std::istringstream bad("1\n2\nthree\n");
  try {
    read_set(bad, "bad.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InputFormat);
    EXPECT_NE(std::string(e.what()).find("bad.txt:3"), std::string::npos);
  }
  std::istringstream empty("# nothing\n");
  EXPECT_EQ(kind_of([&] { read_set(empty, "e"); }), ErrorKind::EmptySet);
  EXPECT_EQ(kind_of([] { read_set_file("/nonexistent/set.txt"); }), ErrorKind::InputFormat);
}
