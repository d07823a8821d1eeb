#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "sumprod/exact_scalar.hpp"

namespace sumprod {

enum class SignSummary { all_positive, all_negative, mixed, contains_zero };

std::string_view to_string(SignSummary s);

/// Nonempty, strictly increasing set of exact rationals.
class FiniteSet {
 public:
  /// Sorts and deduplicates. Throws Error(EmptySet) for an empty input.
  static FiniteSet make(std::vector<ExactScalar> values);
  static FiniteSet make(std::initializer_list<std::int64_t> values);
  /// Caller guarantees `values` is strictly increasing and nonempty.
  static FiniteSet from_sorted_unique(std::vector<ExactScalar> values);
  /// {first, first+1, ..., first+count-1}
  static FiniteSet interval(std::int64_t first, std::int64_t count);

  std::size_t size() const noexcept { return elems_.size(); }
  const ExactScalar& operator[](std::size_t i) const noexcept { return elems_[i]; }
  const ExactScalar& min() const noexcept { return elems_.front(); }
  const ExactScalar& max() const noexcept { return elems_.back(); }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }
  std::span<const ExactScalar> elements() const noexcept { return elems_; }

  SignSummary sign_summary() const noexcept { return sign_; }
  bool is_positive() const noexcept { return sign_ == SignSummary::all_positive; }
  bool contains_zero() const noexcept { return sign_ == SignSummary::contains_zero; }
  /// True when every element is an integer stored inline (fits in 63 bits).
  bool small_integers() const noexcept { return small_integers_; }

  bool contains(const ExactScalar& x) const;
  /// Index of x, or size() if absent.
  std::size_t index_of(const ExactScalar& x) const;

  FiniteSet scaled(const ExactScalar& alpha) const;
  FiniteSet negated() const;

  friend bool operator==(const FiniteSet& a, const FiniteSet& b) { return a.elems_ == b.elems_; }

 private:
  explicit FiniteSet(std::vector<ExactScalar> sorted);

  std::vector<ExactScalar> elems_;
  SignSummary sign_ = SignSummary::all_positive;
  bool small_integers_ = true;
};

}  // namespace sumprod
