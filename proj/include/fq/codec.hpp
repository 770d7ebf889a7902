#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fq/bitmatrix.hpp"
#include "fq/degree.hpp"

namespace fq {

// The k unknown input symbols X_0..X_{k-1} as packed bits.
using InputVector = BitVector;

// One query: the subset of input symbols whose XOR answers it.
struct Query {
  std::uint32_t k = 0;
  std::vector<std::uint32_t> indices;  // 0-based, strictly increasing, size in [1, k]
};

// Sampling matrix paired with the parity answers, one bit per row.
struct MeasurementBatch {
  BitMatrix matrix;   // n x k; row i is query i
  BitVector answers;  // n bits

  [[nodiscard]] std::size_t n() const noexcept { return matrix.rows(); }
  [[nodiscard]] std::size_t k() const noexcept { return matrix.cols(); }
  bool operator==(const MeasurementBatch&) const = default;
};

// Incremental query generator: draws a degree, then an equiprobable subset of
// that size by partial Fisher-Yates over a persistent index permutation
// (O(d) per query, exactly uniform over all C(k, d) subsets).
class QueryStream {
 public:
  explicit QueryStream(const DegreeDistribution& dist);

  // Indices of the next query, unsorted; the span is valid until the next call.
  std::span<const std::uint32_t> next(Rng& g);

 private:
  const DegreeDistribution* dist_;
  std::vector<std::uint32_t> perm_;
};

// One i.i.d. query from the encoding rule; indices are returned sorted.
[[nodiscard]] Query sample_query(const DegreeDistribution& dist, Rng& g);

// Parity measurement: XOR of x at the query's indices.
[[nodiscard]] bool encode(const InputVector& x, const Query& q);

// n i.i.d. queries (sampling with replacement; duplicate rows permitted) with
// answers computed against x. Deterministic given the generator state.
[[nodiscard]] MeasurementBatch generate_batch(const InputVector& x,
                                              const DegreeDistribution& dist, std::size_t n,
                                              Rng& g);

// Binary container: magic "FQB1", then k and n as 64-bit little-endian, then
// n packed rows (ceil(k/64) little-endian 64-bit words each, word 0 holding
// columns 0..63), then ceil(n/8) answer bytes (answer i at bit i%8 of byte i/8).
void write_batch(const MeasurementBatch& batch, std::ostream& out);
[[nodiscard]] MeasurementBatch read_batch(std::istream& in);
void write_batch_file(const MeasurementBatch& batch, const std::string& path);
[[nodiscard]] MeasurementBatch read_batch_file(const std::string& path);

// Human-readable export: header "row,answer,indices"; indices 0-based,
// ';'-separated within the field.
void write_batch_csv(const MeasurementBatch& batch, std::ostream& out);

}  // namespace fq
