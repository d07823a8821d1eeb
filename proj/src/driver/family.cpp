#include "sumprod/driver/family.hpp"

#include <set>

#include "sumprod/construction.hpp"
#include "sumprod/driver/rng.hpp"
#include "sumprod/error.hpp"
#include "sumprod/set_io.hpp"

namespace sumprod::driver {

namespace {

constexpr std::string_view kNames[] = {"interval",      "arithmetic",         "geometric", "convex_squares",
                                       "random_subset", "balog_construction", "file"};

}  // namespace

std::string_view to_string(FamilyKind k) { return kNames[static_cast<int>(k)]; }

FamilyKind family_kind_from_string(std::string_view s) {
  for (int i = 0; i < 7; ++i)
    if (kNames[i] == s) return static_cast<FamilyKind>(i);
  throw Error(ErrorKind::InputFormat, "unknown family kind '" + std::string(s) + "'");
}

FiniteSet generate_family(const FamilySpec& spec, std::uint64_t n) {
  if (n < 1) throw Error(ErrorKind::InputFormat, "family size must be at least 1");
  std::vector<ExactScalar> v;
  switch (spec.kind) {
    case FamilyKind::interval:
      return FiniteSet::interval(1, static_cast<std::int64_t>(n));
    case FamilyKind::arithmetic: {
      if (spec.step.is_zero()) throw Error(ErrorKind::InputFormat, "arithmetic step must be nonzero");
      ExactScalar x = spec.start;
      for (std::uint64_t i = 0; i < n; ++i, x += spec.step) v.push_back(x);
      break;
    }
    case FamilyKind::geometric: {
      if (spec.ratio.sign() <= 0 || spec.ratio == ExactScalar(1))
        throw Error(ErrorKind::InputFormat, "geometric ratio must be positive and different from 1");
      ExactScalar x = 1;
      for (std::uint64_t i = 0; i < n; ++i, x *= spec.ratio) v.push_back(x);
      break;
    }
    case FamilyKind::convex_squares:
      for (std::uint64_t k = 1; k <= n; ++k) v.push_back(static_cast<std::int64_t>(k * k));
      break;
    case FamilyKind::random_subset: {
      if (n > spec.range)
        throw Error(ErrorKind::InputFormat, "random_subset of size " + std::to_string(n) + " from range " +
                                                std::to_string(spec.range));
      SplitMix64 rng(spec.seed ^ (n * 0x9E3779B97F4A7C15ULL));
      std::set<std::uint64_t> chosen;
      for (std::uint64_t j = spec.range - n + 1; j <= spec.range; ++j) {
        std::uint64_t t = 1 + rng.uniform(j);
        if (!chosen.insert(t).second) chosen.insert(j);
      }
      for (auto x : chosen) v.push_back(static_cast<std::int64_t>(x));
      break;
    }
    case FamilyKind::balog_construction:
      return *construct_set(choose_parameters(n)).a;
    case FamilyKind::file: {
      FiniteSet all = read_set_file(spec.path);
      if (all.size() < n)
        throw Error(ErrorKind::InputFormat, spec.path + " has " + std::to_string(all.size()) + " elements, need " +
                                                std::to_string(n));
      v.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
      return FiniteSet::from_sorted_unique(std::move(v));
    }
  }
  return FiniteSet::make(std::move(v));
}

}  // namespace sumprod::driver
