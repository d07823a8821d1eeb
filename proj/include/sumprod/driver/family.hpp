#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/exact_scalar.hpp"
#include "sumprod/finite_set.hpp"

namespace sumprod::driver {

enum class FamilyKind { interval, arithmetic, geometric, convex_squares, random_subset, balog_construction, file };

std::string_view to_string(FamilyKind k);
/// Throws Error(InputFormat) for an unknown name.
FamilyKind family_kind_from_string(std::string_view s);

struct FamilySpec {
  std::string id;
  FamilyKind kind = FamilyKind::interval;
  ExactScalar start = 1;  // arithmetic
  ExactScalar step = 1;   // arithmetic
  ExactScalar ratio = 2;  // geometric, first term 1
  std::uint64_t range = 0;  // random_subset draws from {1, ..., range}
  std::uint64_t seed = 0;
  std::string path;                  // file
  std::vector<std::uint64_t> sizes;  // overrides the sweep grid when nonempty
};

/// The member of the family with n elements. Deterministic in (spec, n).
///
/// random_subset runs Floyd's sampling with SplitMix64 seeded by
/// seed ^ (n * 0x9E3779B97F4A7C15): for j = range-n+1, ..., range draw
/// t = 1 + uniform(j) and insert t, or j if t is already present.
FiniteSet generate_family(const FamilySpec& spec, std::uint64_t n);

}  // namespace sumprod::driver
