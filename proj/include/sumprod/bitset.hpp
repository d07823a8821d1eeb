#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace sumprod {

/// Plain dynamic bit vector used by the integer fast paths.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::uint64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::uint64_t size() const noexcept { return bits_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  const std::uint64_t* words() const noexcept { return words_.data(); }
  std::uint64_t* words() noexcept { return words_.data(); }

  void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

  /// this |= (src << shift), truncated at size().
  void or_shifted(const Bitset& src, std::uint64_t shift) noexcept {
    const std::size_t ws = shift >> 6;
    const unsigned bs = shift & 63;
    const std::size_t n = words_.size();
    const std::uint64_t* s = src.words_.data();
    std::uint64_t* d = words_.data();
    const std::size_t m = src.words_.size();
    if (bs == 0) {
      for (std::size_t i = 0; i < m && i + ws < n; ++i) d[i + ws] |= s[i];
    } else {
      for (std::size_t i = 0; i < m && i + ws < n; ++i) {
        d[i + ws] |= s[i] << bs;
        if (i + ws + 1 < n) d[i + ws + 1] |= s[i] >> (64 - bs);
      }
    }
    clear_tail();
  }

  std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w];
      while (x != 0) {
        f((static_cast<std::uint64_t>(w) << 6) + static_cast<std::uint64_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }

 private:
  void clear_tail() noexcept {
    if ((bits_ & 63) != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (bits_ & 63)) - 1;
  }

  std::uint64_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sumprod
