#pragma once

#include <cstdint>

#include "fq/codec.hpp"

namespace fq {

enum class DecodeKind { Unique, Ambiguous, Inconsistent };

struct DecodeResult {
  DecodeKind kind = DecodeKind::Ambiguous;
  InputVector solution;        // populated iff kind == Unique
  std::uint32_t rank = 0;      // pivots found (for peel_decode: symbols resolved)
  std::uint32_t free_vars = 0; // k - rank, populated iff kind == Ambiguous
};

// Rank over GF(2) by word-parallel row reduction on a private copy.
[[nodiscard]] std::uint32_t rank(const BitMatrix& a);

// Maximum-likelihood decoding: Gauss-Jordan elimination of [A | y]. Unique iff
// the system pins every variable (rank == k); Ambiguous reports the rank and
// free-variable count; Inconsistent can only arise for batches that were not
// produced from a true input vector.
[[nodiscard]] DecodeResult ml_decode(const MeasurementBatch& batch);

// Iterative peeling: repeatedly substitutes weight-1 equations. Unique iff all
// k symbols resolve; peel success implies ml_decode success on the same batch.
// Kept for speed comparisons, not used for error statistics.
[[nodiscard]] DecodeResult peel_decode(const MeasurementBatch& batch);

// A x over GF(2).
[[nodiscard]] BitVector multiply(const BitMatrix& a, const BitVector& x);

// True if some column is touched by no row, i.e. an input symbol is isolated.
[[nodiscard]] bool has_isolated_column(const BitMatrix& a);

}  // namespace fq
