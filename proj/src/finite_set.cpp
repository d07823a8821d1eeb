#include "sumprod/finite_set.hpp"

#include <algorithm>

#include "sumprod/error.hpp"

namespace sumprod {

std::string_view to_string(SignSummary s) {
  switch (s) {
    case SignSummary::all_positive: return "all_positive";
    case SignSummary::all_negative: return "all_negative";
    case SignSummary::mixed: return "mixed";
    case SignSummary::contains_zero: return "contains_zero";
  }
  return "unknown";
}

FiniteSet::FiniteSet(std::vector<ExactScalar> sorted) : elems_(std::move(sorted)) {
  if (elems_.empty()) throw Error(ErrorKind::EmptySet, "a set needs at least one element");
  int lo = elems_.front().sign();
  int hi = elems_.back().sign();
  if (lo > 0) {
    sign_ = SignSummary::all_positive;
  } else if (hi < 0) {
    sign_ = SignSummary::all_negative;
  } else if (std::binary_search(elems_.begin(), elems_.end(), ExactScalar(0))) {
    sign_ = SignSummary::contains_zero;
  } else {
    sign_ = SignSummary::mixed;
  }
  small_integers_ = std::all_of(elems_.begin(), elems_.end(),
                                [](const ExactScalar& x) { return x.is_small() && x.is_integer(); });
}

FiniteSet FiniteSet::make(std::vector<ExactScalar> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySet, "a set needs at least one element");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return FiniteSet(std::move(values));
}

FiniteSet FiniteSet::make(std::initializer_list<std::int64_t> values) {
  std::vector<ExactScalar> v(values.begin(), values.end());
  return make(std::move(v));
}

FiniteSet FiniteSet::from_sorted_unique(std::vector<ExactScalar> values) { return FiniteSet(std::move(values)); }

FiniteSet FiniteSet::interval(std::int64_t first, std::int64_t count) {
  if (count < 1) throw Error(ErrorKind::EmptySet, "interval needs at least one element");
  std::vector<ExactScalar> v;
  v.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) v.emplace_back(first + i);
  return FiniteSet(std::move(v));
}

bool FiniteSet::contains(const ExactScalar& x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

std::size_t FiniteSet::index_of(const ExactScalar& x) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
  if (it == elems_.end() || *it != x) return elems_.size();
  return static_cast<std::size_t>(it - elems_.begin());
}

FiniteSet FiniteSet::scaled(const ExactScalar& alpha) const {
  if (alpha.is_zero()) return FiniteSet(std::vector<ExactScalar>{ExactScalar(0)});
  std::vector<ExactScalar> v;
  v.reserve(elems_.size());
  for (const auto& x : elems_) v.push_back(x * alpha);
  if (alpha.sign() < 0) std::reverse(v.begin(), v.end());
  return FiniteSet(std::move(v));
}

FiniteSet FiniteSet::negated() const { return scaled(ExactScalar(-1)); }

}  // namespace sumprod
