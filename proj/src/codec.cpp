#include "fq/codec.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace fq {

QueryStream::QueryStream(const DegreeDistribution& dist) : dist_(&dist), perm_(dist.k()) {
  std::iota(perm_.begin(), perm_.end(), 0u);
}

std::span<const std::uint32_t> QueryStream::next(Rng& g) {
  const std::uint32_t k = dist_->k();
  const std::uint32_t d = sample_degree(*dist_, g);
  // Partial Fisher-Yates; starting from any permutation the first d slots end
  // up a uniform d-subset, so the permutation is reused across calls.
  for (std::uint32_t t = 0; t < d; ++t) {
    const auto j = t + static_cast<std::uint32_t>(uniform_below(g, k - t));
    std::swap(perm_[t], perm_[j]);
  }
  return {perm_.data(), d};
}

Query sample_query(const DegreeDistribution& dist, Rng& g) {
  QueryStream stream(dist);
  const auto picked = stream.next(g);
  Query q{dist.k(), {picked.begin(), picked.end()}};
  std::sort(q.indices.begin(), q.indices.end());
  return q;
}

bool encode(const InputVector& x, const Query& q) {
  if (x.size() != q.k) throw std::invalid_argument("encode: dimension mismatch");
  bool acc = false;
  for (auto idx : q.indices) acc ^= x.get(idx);
  return acc;
}

MeasurementBatch generate_batch(const InputVector& x, const DegreeDistribution& dist,
                                std::size_t n, Rng& g) {
  if (n < 1) throw std::invalid_argument("generate_batch: n must be >= 1");
  if (x.size() != dist.k()) throw std::invalid_argument("generate_batch: dimension mismatch");
  MeasurementBatch batch{BitMatrix(n, dist.k()), BitVector(n)};
  QueryStream stream(dist);
  for (std::size_t i = 0; i < n; ++i) {
    bool answer = false;
    for (auto idx : stream.next(g)) {
      batch.matrix.set(i, idx, true);
      answer ^= x.get(idx);
    }
    batch.answers.set(i, answer);
  }
  return batch;
}

namespace {

constexpr std::array<char, 4> kMagic{'F', 'Q', 'B', '1'};

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<char, 8> buf;
  in.read(buf.data(), buf.size());
  if (!in) throw std::runtime_error("batch read: truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

}  // namespace

void write_batch(const MeasurementBatch& batch, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_u64_le(out, batch.k());
  put_u64_le(out, batch.n());
  for (std::size_t r = 0; r < batch.n(); ++r)
    for (auto w : batch.matrix.row(r)) put_u64_le(out, w);
  const std::size_t n = batch.n();
  for (std::size_t byte = 0; byte * 8 < n; ++byte) {
    unsigned char b = 0;
    for (std::size_t bit = 0; bit < 8 && byte * 8 + bit < n; ++bit)
      b |= static_cast<unsigned char>(batch.answers.get(byte * 8 + bit)) << bit;
    out.put(static_cast<char>(b));
  }
  if (!out) throw std::runtime_error("batch write failed");
}

MeasurementBatch read_batch(std::istream& in) {
  std::array<char, 4> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("batch read: bad magic");
  const std::uint64_t k = get_u64_le(in);
  const std::uint64_t n = get_u64_le(in);
  if (k < 1 || n < 1) throw std::runtime_error("batch read: empty dimensions");

  MeasurementBatch batch{BitMatrix(n, k), BitVector(n)};
  const std::size_t wpr = batch.matrix.words_per_row();
  const std::uint64_t tail_mask =
      (k % 64) ? ~std::uint64_t{0} >> (64 - (k % 64)) : ~std::uint64_t{0};
  for (std::uint64_t r = 0; r < n; ++r) {
    auto row = batch.matrix.row(r);
    for (std::size_t i = 0; i < wpr; ++i) row[i] = get_u64_le(in);
    if (row[wpr - 1] & ~tail_mask) throw std::runtime_error("batch read: stray bits past column k");
    if (batch.matrix.row_weight(r) == 0) throw std::runtime_error("batch read: empty query row");
  }
  for (std::uint64_t byte = 0; byte * 8 < n; ++byte) {
    const int c = in.get();
    if (c < 0) throw std::runtime_error("batch read: truncated answers");
    for (std::uint64_t bit = 0; bit < 8 && byte * 8 + bit < n; ++bit)
      batch.answers.set(byte * 8 + bit, (c >> bit) & 1);
  }
  return batch;
}

void write_batch_file(const MeasurementBatch& batch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_batch(batch, out);
}

MeasurementBatch read_batch_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_batch(in);
}

void write_batch_csv(const MeasurementBatch& batch, std::ostream& out) {
  out << "row,answer,indices\n";
  for (std::size_t r = 0; r < batch.n(); ++r) {
    out << r << ',' << batch.answers.get(r) << ',';
    bool first = true;
    for (std::size_t c = 0; c < batch.k(); ++c) {
      if (!batch.matrix.get(r, c)) continue;
      if (!first) out << ';';
      out << c;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace fq
