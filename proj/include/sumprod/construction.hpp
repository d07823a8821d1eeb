#pragma once

// Integer sets A with small |AA + mA|: A collects the first n integers with
// many small prime factors, m is the square of a primorial q. Dividing by m
// turns AA + mA into BB + B for B = A/m, so the same counts apply to BB + B.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumprod/exact_scalar.hpp"
#include "sumprod/finite_set.hpp"

namespace sumprod {

/// Base of the iterated logarithm in the selection thresholds.
enum class LogBase { natural, two };

struct ConstructionParams {
  std::uint64_t n = 0;
  std::uint64_t y = 0;  // prime bound; q is the product of primes below y
  std::uint64_t q = 0;
  std::uint64_t m = 0;  // q^2
  std::vector<std::uint64_t> primes;
  double theta = 0.0;  // selection threshold on f
  bool theta_overridden = false;
  LogBase log_base = LogBase::natural;
};

/// log log y in the chosen base; may be negative or undefined (y <= e).
double iterated_log(std::uint64_t y, LogBase base);
/// L - 2 sqrt(L) with L = log log y; -infinity when L <= 0.
double selection_threshold(std::uint64_t y, LogBase base = LogBase::natural);
/// 2L - 4 sqrt(L); the lower bound g exceeds on every element of AA.
double product_threshold(std::uint64_t y, LogBase base = LogBase::natural);

/// Largest primorial q with q^2 < n; y is the smallest prime with exactly
/// those primes below it. Throws Error(NoValidPrimorial) for n < 5.
ConstructionParams choose_parameters(std::uint64_t n, LogBase base = LogBase::natural);

/// Explicit prime bound, skipping the q^2 < n requirement.
ConstructionParams params_for_bound(std::uint64_t n, std::uint64_t y, LogBase base = LogBase::natural);

/// Number of distinct primes p < y dividing x.
unsigned f_value(std::uint64_t x, std::uint64_t y);
/// Sum over primes p < y of min(v_p(x), 2).
unsigned g_value(std::uint64_t x, std::uint64_t y);

struct ConstructionReport {
  ConstructionParams params;
  std::optional<FiniteSet> a;
  bool within_3n = false;         // A subset of [1, 3n]
  bool block_density_ok = false;  // every length-q block has >= q/2 qualifying integers

  // Filled by measure_construction.
  std::optional<std::uint64_t> size_aa;
  std::optional<std::uint64_t> size_aa_plus_ma;
  std::optional<std::uint64_t> residues_hit;  // classes mod q^2 meeting AA
  std::optional<ExactScalar> normalized;      // |AA + mA| / n^2
  std::optional<bool> within_10n2;            // AA + mA subset of [1, 10 n^2]
  std::optional<bool> residue_bound_ok;       // |AA+mA| <= residues_hit * ceil(10n^2 / q^2)
};

/// The n smallest positive integers x with f(x) > theta (theta from params
/// unless overridden). Throws Error(DensityFailure) when [1, 3n] holds fewer
/// than n of them.
ConstructionReport construct_set(const ConstructionParams& params, std::optional<double> theta_override = {});

struct MeasureConfig {
  std::uint64_t memory_budget_bytes = std::uint64_t{8} << 30;
};

struct Measurement {
  std::uint64_t size_aa = 0;
  std::uint64_t size_aa_plus_ma = 0;
};

/// Exact |AA| and |AA + mA| for a set of positive integers. Throws
/// Error(ResourceLimit) when the indicator of AA exceeds the budget.
Measurement exact_measure(const FiniteSet& a, std::uint64_t m, const MeasureConfig& cfg = {});

struct ResidueProfile {
  std::uint64_t residues_hit = 0;
  ExactScalar proportion;
};

/// Residue classes mod `modulus` meeting AA, from the residues of A alone.
ResidueProfile residue_profile(const FiniteSet& a, std::uint64_t modulus);

/// Runs exact_measure and residue_profile on report.a and fills the
/// measured fields and range checks.
void measure_construction(ConstructionReport& report, const MeasureConfig& cfg = {});

/// Key-value text block, one "key=value" per line.
std::string to_key_value(const ConstructionReport& report);

struct MomentCheck {
  ExactScalar product_formula;  // prod_{p<y} (1 + 1/p + 2/p^2)
  ExactScalar block_average;    // mean of 2^g over one block of length q^2
  bool equal = false;
};

/// Largest q^2 the block enumerations accept by default.
inline constexpr std::uint64_t kDefaultBlockBudget = 100'000'000;

MomentCheck exponential_moment_check(std::uint64_t y, std::uint64_t max_block = kDefaultBlockBudget);

struct MarkovCheck {
  std::uint64_t y = 0;
  std::uint64_t modulus = 0;    // q^2
  double theta = 0.0;           // selection threshold used for A
  double threshold = 0.0;       // T = 2 theta
  std::int64_t min_exceeding = 0;  // smallest value g can take above T (g >= 0)
  std::uint64_t classes_above = 0;
  ExactScalar markov_bound;     // q^2 * product_formula / 2^min_exceeding
  bool markov_holds = false;
  std::uint64_t qualifying_residues = 0;  // residues r mod q^2 with f(r) > theta
  std::uint64_t min_g_on_aa = 0;  // min of g over residues hit by AA
  std::optional<std::uint64_t> residues_hit;  // only when enumerated residue by residue
  bool inclusion_holds = false;   // every residue hit by AA has g > T
  bool holds() const { return markov_holds && inclusion_holds; }
};

struct MarkovOptions {
  LogBase log_base = LogBase::natural;
  std::optional<double> theta_override;
  std::uint64_t max_block = kDefaultBlockBudget;
  /// Up to this q^2 the residues of AA are enumerated pair by pair; above
  /// it, min g over AA comes from the capped valuation profiles of the
  /// qualifying residues (g(ab) depends only on those profiles).
  std::uint64_t residue_enumeration_limit = 900;
};

/// Markov bound on the residues where g exceeds T, and the inclusion of all
/// residues of AA in that region.
MarkovCheck markov_residue_bound(std::uint64_t y, const MarkovOptions& opt = {});

}  // namespace sumprod
