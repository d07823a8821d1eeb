#pragma once

// Lines through the origin covering A x A, and the counting machinery built
// on them: dyadic levels, vector sums of two lines, collision counts between
// such sums, and per-cluster point counts in (AA+A) x (AA+A).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "sumprod/exact_scalar.hpp"
#include "sumprod/finite_set.hpp"
#include "sumprod/set_ops.hpp"

namespace sumprod {

struct SlopeEntry {
  ExactScalar lambda;
  FiniteSet a_lambda;  // {x in A : lambda x in A}
};

struct SlopeDecomposition {
  FiniteSet base;
  std::vector<SlopeEntry> entries;  // increasing lambda

  std::uint64_t mass() const;
  /// Index of the entry with this slope, or entries.size().
  std::size_t index_of(const ExactScalar& lambda) const;
};

/// Throws Error(SignRestriction) unless every element is positive.
SlopeDecomposition slope_decomposition(const FiniteSet& a);

/// "p/q mass" per line, increasing slope.
void write_decomposition(std::ostream& os, const SlopeDecomposition& d);

struct RefinedLevel {
  std::uint64_t t0 = 0;
  std::vector<std::size_t> slopes;  // entries with t0|A| <= |A A_lambda| < 2 t0 |A|
};

struct DyadicLevel {
  std::uint64_t tau = 0;
  std::vector<std::size_t> slopes;  // S_tau, as indices into entries
  std::uint64_t mass = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> level_masses;  // (tau, mass) for every nonempty level
  bool guarantee_holds = false;  // mass >= |A|^2 / (2 log2 |A|)
  std::optional<RefinedLevel> refined;
};

struct DyadicOptions {
  bool refine = true;
  OpConfig ops;
};

/// Level of maximal mass (ties to the larger tau). Throws Error(Degenerate)
/// for a singleton base set.
DyadicLevel dyadic_select(const SlopeDecomposition& d, const DyadicOptions& opt = {});

struct PlanePoint {
  ExactScalar x;
  ExactScalar y;
  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
  friend auto operator<=>(const PlanePoint&, const PlanePoint&) = default;
};

/// {(a, lambda a) + (x', lambda' x') c : a in A_lambda, c in A}, sorted.
/// Throws Error(InvalidPair) for equal or unknown slopes, or x' not in A_lambda'.
std::vector<PlanePoint> line_pair_sum(const SlopeDecomposition& d, const ExactScalar& lambda,
                                      const ExactScalar& lambda_prime, const ExactScalar& fixed_x);

struct BalogChain {
  std::uint64_t lhs = 0;  // |AA+A|^2
  std::uint64_t rhs = 0;  // sum over consecutive slopes of |A_{l_i}| |A A_{l_{i+1}}|
  bool holds = false;
};

BalogChain balog_chain(const FiniteSet& a, const OpConfig& cfg = {});

/// One chosen x-coordinate a_lambda per entry of a decomposition.
struct FixedPoints {
  std::vector<ExactScalar> x;

  /// The smallest x on each line.
  static FixedPoints minimal(const SlopeDecomposition& d);
};

struct CollisionCount {
  std::uint64_t e = 0;        // size of the intersection of the two vector-sum families
  bool same_second = false;   // lambda4 == lambda2
  std::uint64_t weight = 0;   // |A_lambda1|, or |A| when lambda4 == lambda2
  ExactScalar alpha;          // dilation of the second set in the energy
  std::uint64_t energy = 0;   // E_+(A, alpha A_lambda3), or E_+(A, alpha A_lambda1)
  double bound = 0.0;         // sqrt(weight * energy)
  bool holds = false;         // e^2 <= weight * energy, decided exactly
};

/// Collision count for slopes given as entry indices. Throws
/// Error(InvalidQuadruple) unless lambda1 != lambda2, lambda3 != lambda4,
/// {lambda1, lambda3} and {lambda2, lambda4} are disjoint and
/// (lambda1, lambda2) != (lambda3, lambda4).
CollisionCount collision_count(const SlopeDecomposition& d, std::size_t l1, std::size_t l2, std::size_t l3,
                               std::size_t l4, const FixedPoints& fp, const OpConfig& cfg = {});

struct ClusterDiagnostic {
  std::uint64_t m = 0;
  std::size_t cluster_index = 0;
  std::vector<std::size_t> slopes;  // 2M consecutive entries; the first M form V, the rest W
  ExactScalar lambda_low;
  ExactScalar lambda_high;
  std::uint64_t tau = 0;
  std::uint64_t mu_actual = 0;  // points of (AA+A)^2 strictly between the extreme lines
  std::uint64_t main_term = 0;  // tau |A| M^2
  std::uint64_t collision_sum = 0;
  std::vector<ExactScalar> fixed_x;  // per slope of the cluster
  bool holds = false;                // mu_actual + collision_sum >= main_term
};

struct ClusterOptions {
  bool use_refined = false;  // cluster the refined slope set instead of S_tau
  std::optional<FixedPoints> fixed_points;
  OpConfig ops;
};

/// Diagnostics for every full cluster of 2M consecutive slopes of the
/// selected level. Throws Error(InvalidClusterWidth) unless 2 <= 2M <= |S|.
std::vector<ClusterDiagnostic> cluster_mu(const SlopeDecomposition& d, std::uint64_t m,
                                          const ClusterOptions& opt = {});

/// Sum of collision_count over ordered quadruples with lambda1, lambda3 in V,
/// lambda2, lambda4 in W and (lambda1, lambda2) != (lambda3, lambda4).
std::uint64_t cluster_collision_sum_direct(const SlopeDecomposition& d, const ClusterDiagnostic& c,
                                           const FixedPoints& fp);

struct BigRatioDiagnostic {
  std::uint64_t size_ax_plus_ax = 0;
  std::uint64_t size_ratio_set = 0;  // |A/A|
  std::uint64_t size_x = 0;
  std::uint64_t e_plus_x = 0;
  ExactScalar k;          // |X|^3 / E_+(X)
  double ratio_plain = 0;  // |AX+AX| / (|X| |A/A|^{1/2})
  double ratio_k = 0;      // ratio_plain / K^{1/8}
};

BigRatioDiagnostic bigratio_diagnostic(const FiniteSet& a, const FiniteSet& x, const OpConfig& cfg = {});

}  // namespace sumprod
