#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sumprod/exact_scalar.hpp"
#include "sumprod/finite_set.hpp"

namespace sumprod {

enum class BinaryOp { sum, difference, product, ratio };
enum class EnergyKind { additive, multiplicative };

/// Whether integer inputs may be routed through the bit-vector path.
enum class IntegerPath { automatic, always, never };

std::string_view to_string(BinaryOp op);

struct OpConfig {
  /// Working-state ceiling for one operation.
  std::uint64_t memory_budget_bytes = std::uint64_t{8} << 30;
  /// Widest output range (in bits) the integer fast path will allocate.
  std::uint64_t fast_path_max_bits = std::uint64_t{1} << 34;
  IntegerPath integer_path = IntegerPath::automatic;
  /// When a composite result would not fit the budget, return only its
  /// cardinality (computed partition by partition) instead of failing.
  bool count_only_fallback = true;
  unsigned workers = 1;
};

/// {a op b : a in A, b in B}. Ratio requires 0 not in B.
FiniteSet binary_op(BinaryOp op, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg = {});

/// |binary_op(op, A, B)| without materializing beyond the memory budget.
std::uint64_t binary_op_size(BinaryOp op, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg = {});

struct CombineResult {
  std::uint64_t size = 0;
  std::optional<FiniteSet> set;  // empty when only the cardinality fit the budget
};

/// AB+C = {ab + c}. Falls back to partitioned counting when the result does
/// not fit the budget; throws Error(ResourceLimit) if that fallback is off.
CombineResult combine(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg = {});

/// |AB+C|, always by counting.
std::uint64_t combine_size(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg = {});

/// Number of (a, b, a', b') in A x B x A x B with a+b = a'+b' (resp. ab = a'b').
std::uint64_t energy(EnergyKind kind, const FiniteSet& a, const FiniteSet& b, const OpConfig& cfg = {});

struct EnergyReport {
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  std::uint64_t e_plus = 0;
  std::optional<std::uint64_t> e_mult;  // absent when 0 is in A
  ExactScalar k;                        // |A|^3 / E_+(A)
  ExactScalar sum_bound;                // |A|^4 / |A+A|
  ExactScalar difference_bound;         // |A|^4 / |A-A|
  std::optional<ExactScalar> product_bound;  // |A|^4 / |AA|
  std::optional<ExactScalar> ratio_bound;    // |A|^4 / |A/A|

  /// Every lower bound present is at most the matching energy.
  bool bounds_hold() const;
};

EnergyReport energy_bounds_report(const FiniteSet& a, const OpConfig& cfg = {});

/// (|A+C| |B+C|) / (|A+B| |C|); at least 1 for all finite sets.
ExactScalar ruzsa_ratio(const FiniteSet& a, const FiniteSet& b, const FiniteSet& c, const OpConfig& cfg = {});

struct DilateIdentity {
  std::uint64_t size = 0;  // |a_max A + A|
  bool holds = false;      // size == |A|^2
};

/// Requires a positive set whose distinct elements are at least 1 apart
/// (Error(NotWellSpaced) otherwise).
DilateIdentity max_dilate_identity(const FiniteSet& a, const OpConfig& cfg = {});

}  // namespace sumprod
