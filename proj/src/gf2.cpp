#include "fq/gf2.hpp"

#include <stdexcept>
#include <vector>

namespace fq {

std::uint32_t rank(const BitMatrix& a) {
  BitMatrix work = a;
  const std::size_t n = work.rows(), k = work.cols();
  std::size_t r = 0;
  for (std::size_t col = 0; col < k && r < n; ++col) {
    std::size_t pivot = r;
    while (pivot < n && !work.get(pivot, col)) ++pivot;
    if (pivot == n) continue;
    work.swap_rows(r, pivot);
    for (std::size_t q = r + 1; q < n; ++q)
      if (work.get(q, col)) work.xor_rows(q, r);
    ++r;
  }
  return static_cast<std::uint32_t>(r);
}

DecodeResult ml_decode(const MeasurementBatch& batch) {
  const std::size_t n = batch.n(), k = batch.k();
  if (batch.answers.size() != n) throw std::invalid_argument("ml_decode: answer count mismatch");

  // Augmented system [A | y]: k columns of A plus the answer bit at column k.
  const std::size_t wpr = BitVector::word_count(k + 1);
  std::vector<std::uint64_t> work(n * wpr, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto src = batch.matrix.row(r);
    auto* dst = work.data() + r * wpr;
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    if (batch.answers.get(r)) dst[k >> 6] |= std::uint64_t{1} << (k & 63);
  }

  const auto get = [&](std::size_t r, std::size_t c) -> bool {
    return (work[r * wpr + (c >> 6)] >> (c & 63)) & 1u;
  };
  const auto xor_rows = [&](std::size_t dst, std::size_t src) {
    auto* d = work.data() + dst * wpr;
    const auto* s = work.data() + src * wpr;
    for (std::size_t i = 0; i < wpr; ++i) d[i] ^= s[i];
  };
  const auto swap_rows = [&](std::size_t a, std::size_t b) {
    auto* pa = work.data() + a * wpr;
    auto* pb = work.data() + b * wpr;
    for (std::size_t i = 0; i < wpr; ++i) std::swap(pa[i], pb[i]);
  };

  std::vector<std::uint32_t> pivot_col;
  pivot_col.reserve(k);
  std::size_t r = 0;
  for (std::size_t col = 0; col < k && r < n; ++col) {
    std::size_t pivot = r;
    while (pivot < n && !get(pivot, col)) ++pivot;
    if (pivot == n) continue;
    swap_rows(r, pivot);
    for (std::size_t q = 0; q < n; ++q)
      if (q != r && get(q, col)) xor_rows(q, r);
    pivot_col.push_back(static_cast<std::uint32_t>(col));
    ++r;
  }
  const auto rk = static_cast<std::uint32_t>(r);

  // Rows past the pivots have an all-zero coefficient part; a surviving answer
  // bit means no x satisfies the system.
  for (std::size_t q = r; q < n; ++q)
    if (get(q, k)) return DecodeResult{DecodeKind::Inconsistent, {}, rk, 0};

  if (rk == k) {
    InputVector x(k);
    for (std::size_t i = 0; i < k; ++i) x.set(pivot_col[i], get(i, k));
    return DecodeResult{DecodeKind::Unique, std::move(x), rk, 0};
  }
  return DecodeResult{DecodeKind::Ambiguous, {}, rk, static_cast<std::uint32_t>(k) - rk};
}

DecodeResult peel_decode(const MeasurementBatch& batch) {
  const std::size_t n = batch.n(), k = batch.k();
  if (batch.answers.size() != n) throw std::invalid_argument("peel_decode: answer count mismatch");

  BitMatrix work = batch.matrix;
  std::vector<std::uint8_t> ans(n);
  std::vector<std::uint32_t> weight(n);
  std::vector<std::vector<std::uint32_t>> col_rows(k);
  std::vector<std::uint32_t> ready;
  for (std::size_t r = 0; r < n; ++r) {
    ans[r] = batch.answers.get(r);
    weight[r] = static_cast<std::uint32_t>(work.row_weight(r));
    if (weight[r] == 1) ready.push_back(static_cast<std::uint32_t>(r));
    for (std::size_t c = 0; c < k; ++c)
      if (work.get(r, c)) col_rows[c].push_back(static_cast<std::uint32_t>(r));
  }

  InputVector x(k);
  std::uint32_t resolved = 0;
  while (!ready.empty()) {
    const std::uint32_t r = ready.back();
    ready.pop_back();
    if (weight[r] != 1) continue;  // stale entry; the row shrank since push
    std::size_t col = 0;
    while (!work.get(r, col)) ++col;
    const bool value = ans[r];
    x.set(col, value);
    ++resolved;
    for (const std::uint32_t r2 : col_rows[col]) {
      if (!work.get(r2, col)) continue;
      work.set(r2, col, false);
      ans[r2] ^= static_cast<std::uint8_t>(value);
      if (--weight[r2] == 1) ready.push_back(r2);
    }
  }

  for (std::size_t r = 0; r < n; ++r)
    if (weight[r] == 0 && ans[r]) return DecodeResult{DecodeKind::Inconsistent, {}, resolved, 0};

  if (resolved == k) return DecodeResult{DecodeKind::Unique, std::move(x), resolved, 0};
  return DecodeResult{DecodeKind::Ambiguous, {}, resolved, static_cast<std::uint32_t>(k) - resolved};
}

BitVector multiply(const BitMatrix& a, const BitVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("multiply: dimension mismatch");
  BitVector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y.set(r, dot_parity(a.row(r), x.words()));
  return y;
}

bool has_isolated_column(const BitMatrix& a) { return a.column_cover().count() < a.cols(); }

}  // namespace fq
