#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "fq/degree.hpp"

namespace fq::exact {

using Int = mpz_class;
using Rat = mpq_class;

// Canonicalized num/den.
[[nodiscard]] Rat ratio(long num, long den);

[[nodiscard]] Int binomial(std::uint64_t n, std::uint64_t r);

// H_m as an exact rational.
[[nodiscard]] Rat harmonic(std::uint32_t m);

// Exact Soliton probabilities, indexed by degree 0..k.
[[nodiscard]] std::vector<Rat> soliton_probs(const SolitonParams& params);

// Sum of d * probs[d].
[[nodiscard]] Rat mean_degree(const std::vector<Rat>& probs);

[[nodiscard]] double to_double(const Rat& q);

}  // namespace fq::exact
