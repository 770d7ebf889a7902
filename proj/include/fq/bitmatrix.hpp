#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fq/rng.hpp"

namespace fq {

// Packed bit vector. Bit i lives in word i/64 at position i%64 (little-endian
// bit order within a word); bits past size() are kept zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(word_count(size), 0) {}

  static BitVector random(std::size_t size, Rng& g) {
    BitVector v(size);
    for (auto& w : v.words_) w = g();
    v.trim();
    return v;
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  [[nodiscard]] bool get(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }

  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  void xor_with(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("BitVector::xor_with: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  [[nodiscard]] std::span<std::uint64_t> words() noexcept { return words_; }

  bool operator==(const BitVector&) const = default;

  [[nodiscard]] static constexpr std::size_t word_count(std::size_t bits) noexcept {
    return (bits + 63) / 64;
  }

 private:
  void trim() noexcept {
    if (size_ & 63) words_.back() &= ~std::uint64_t{0} >> (64 - (size_ & 63));
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Row-major packed bit matrix; each row occupies words_per_row() words laid
// out like a BitVector.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_(BitVector::word_count(cols)), words_(rows * wpr_, 0) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t words_per_row() const noexcept { return wpr_; }

  [[nodiscard]] bool get(std::size_t r, std::size_t c) const noexcept {
    return (words_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (c & 63);
    if (value)
      words_[r * wpr_ + (c >> 6)] |= bit;
    else
      words_[r * wpr_ + (c >> 6)] &= ~bit;
  }

  [[nodiscard]] std::span<const std::uint64_t> row(std::size_t r) const noexcept {
    return {words_.data() + r * wpr_, wpr_};
  }
  [[nodiscard]] std::span<std::uint64_t> row(std::size_t r) noexcept {
    return {words_.data() + r * wpr_, wpr_};
  }

  void xor_rows(std::size_t dst, std::size_t src) noexcept {
    auto* d = words_.data() + dst * wpr_;
    const auto* s = words_.data() + src * wpr_;
    for (std::size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
  }

  void swap_rows(std::size_t a, std::size_t b) noexcept {
    auto* pa = words_.data() + a * wpr_;
    auto* pb = words_.data() + b * wpr_;
    for (std::size_t i = 0; i < wpr_; ++i) std::swap(pa[i], pb[i]);
  }

  [[nodiscard]] std::size_t row_weight(std::size_t r) const noexcept {
    std::size_t c = 0;
    for (auto w : row(r)) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // OR of every row; zero bits mark columns no row touches.
  [[nodiscard]] BitVector column_cover() const {
    BitVector acc(cols_);
    auto aw = acc.words();
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto* src = words_.data() + r * wpr_;
      for (std::size_t i = 0; i < wpr_; ++i) aw[i] |= src[i];
    }
    return acc;
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t wpr_ = 0;
  std::vector<std::uint64_t> words_;
};

// Parity of the bitwise AND of two equal-length word spans.
[[nodiscard]] inline bool dot_parity(std::span<const std::uint64_t> a,
                                     std::span<const std::uint64_t> b) noexcept {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= a[i] & b[i];
  return std::popcount(acc) & 1u;
}

}  // namespace fq
