#pragma once

// Bounded-memory deduplication of generated rationals.
//
// Generators are callables `gen(row_begin, row_end, part, parts, emit)` that
// call `emit(ExactScalar)` for every value produced by rows in the half-open
// range and belonging to partition `part` of `parts` (every value when
// parts == 1). Equal values must always land in the same partition. Rows are
// split into contiguous chunks across workers and merged back in chunk
// order, so results never depend on scheduling.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "sumprod/exact_scalar.hpp"

namespace sumprod::detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t partition_of(std::uint64_t key, std::uint64_t parts) { return mix64(key) % parts; }

class UniqueAccumulator {
 public:
  struct Overflow {};

  explicit UniqueAccumulator(std::uint64_t cap = UINT64_MAX) : cap_(cap) {}

  void push(ExactScalar v) {
    bytes_ += v.footprint_bytes();
    buffer_.push_back(std::move(v));
    if (buffer_.size() >= flush_at_) flush();
    if (bytes_ > cap_) throw Overflow{};
  }

  void flush() {
    if (buffer_.empty()) return;
    std::sort(buffer_.begin(), buffer_.end());
    buffer_.erase(std::unique(buffer_.begin(), buffer_.end()), buffer_.end());
    if (sorted_.empty()) {
      sorted_.swap(buffer_);
    } else {
      std::vector<ExactScalar> merged;
      merged.reserve(sorted_.size() + buffer_.size());
      std::merge(std::make_move_iterator(sorted_.begin()), std::make_move_iterator(sorted_.end()),
                 std::make_move_iterator(buffer_.begin()), std::make_move_iterator(buffer_.end()),
                 std::back_inserter(merged));
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      sorted_.swap(merged);
    }
    buffer_.clear();
    bytes_ = 0;
    for (const auto& v : sorted_) bytes_ += v.footprint_bytes();
    flush_at_ = std::max<std::size_t>(kMinFlush, sorted_.size());
  }

  std::vector<ExactScalar> take() {
    flush();
    return std::move(sorted_);
  }

  std::size_t size() {
    flush();
    return sorted_.size();
  }

 private:
  static constexpr std::size_t kMinFlush = std::size_t{1} << 16;
  std::vector<ExactScalar> sorted_;
  std::vector<ExactScalar> buffer_;
  std::size_t flush_at_ = kMinFlush;
  std::uint64_t bytes_ = 0;
  std::uint64_t cap_;
};

inline std::vector<ExactScalar> merge_unique(std::vector<ExactScalar> a, std::vector<ExactScalar> b) {
  std::vector<ExactScalar> out;
  out.reserve(a.size() + b.size());
  std::merge(std::make_move_iterator(a.begin()), std::make_move_iterator(a.end()), std::make_move_iterator(b.begin()),
             std::make_move_iterator(b.end()), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class F>
void run_workers(unsigned workers, std::size_t tasks, F&& task) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(tasks, 1))));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) task(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < tasks; t += workers) task(t);
    });
  }
  for (auto& th : pool) th.join();
}

/// Sorted, deduplicated values of the generator over rows [0, rows), or
/// nothing when the retained values would exceed `cap` bytes.
template <class Gen>
std::optional<std::vector<ExactScalar>> collect_unique_bounded(std::size_t rows, unsigned workers, std::uint64_t cap,
                                                               Gen&& gen) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers, rows));
  std::vector<std::vector<ExactScalar>> parts(chunks);
  std::atomic<bool> overflow{false};
  run_workers(workers, chunks, [&](std::size_t c) {
    if (overflow) return;
    std::size_t r0 = rows * c / chunks;
    std::size_t r1 = rows * (c + 1) / chunks;
    UniqueAccumulator acc(cap / chunks);
    try {
      gen(r0, r1, 0, 1, [&](ExactScalar v) { acc.push(std::move(v)); });
      parts[c] = acc.take();
    } catch (const UniqueAccumulator::Overflow&) {
      overflow = true;
    }
  });
  if (overflow) return std::nullopt;
  std::vector<ExactScalar> out = std::move(parts[0]);
  for (std::size_t c = 1; c < chunks; ++c) out = merge_unique(std::move(out), std::move(parts[c]));
  return out;
}

template <class Gen>
std::vector<ExactScalar> collect_unique(std::size_t rows, unsigned workers, Gen&& gen) {
  return *collect_unique_bounded(rows, workers, UINT64_MAX, gen);
}

/// Number of distinct generated values, one partition at a time so that
/// peak memory is about 1/partitions of the full result.
template <class Gen>
std::uint64_t count_unique(std::size_t rows, std::uint64_t partitions, unsigned workers, Gen&& gen) {
  partitions = std::max<std::uint64_t>(1, partitions);
  if (partitions == 1) return collect_unique(rows, workers, gen).size();
  std::vector<std::uint64_t> counts(partitions, 0);
  run_workers(workers, partitions, [&](std::size_t p) {
    UniqueAccumulator acc;
    gen(0, rows, p, partitions, [&](ExactScalar v) { acc.push(std::move(v)); });
    counts[p] = acc.size();
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

/// Sum over distinct generated values of (multiplicity)^2.
template <class Gen>
std::uint64_t sum_squared_multiplicities(std::size_t rows, std::uint64_t partitions, unsigned workers, Gen&& gen) {
  partitions = std::max<std::uint64_t>(1, partitions);
  std::vector<std::uint64_t> partial(partitions, 0);
  run_workers(workers, partitions, [&](std::size_t p) {
    std::vector<ExactScalar> values;
    gen(0, rows, p, partitions, [&](ExactScalar v) { values.push_back(std::move(v)); });
    std::sort(values.begin(), values.end());
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < values.size();) {
      std::size_t j = i + 1;
      while (j < values.size() && values[j] == values[i]) ++j;
      std::uint64_t run = j - i;
      acc += run * run;
      i = j;
    }
    partial[p] = acc;
  });
  std::uint64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

}  // namespace sumprod::detail
