#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fq/degree.hpp"
#include "fq/exact.hpp"

namespace fq {

// Constants of the union-bound case analysis. Transcribed, never tuned.
namespace bound_constants {
// Case "threshold above truncation" requires n * dbar >= 5 * k * log k.
inline constexpr double isolation_log_factor = 5.0;
// Linear sample-count hypotheses n >= C * k for the remaining cases.
inline constexpr std::uint64_t linear_factor_mid = 68;    // threshold in [4, D]
inline constexpr std::uint64_t linear_factor_three = 35;  // threshold == 3
inline constexpr std::uint64_t linear_factor_low = 10;    // threshold <= 2
// Prefactors of the per-measurement exponent.
inline constexpr double mid_mass_fraction = 1.0 / 5.0;
inline constexpr double tail_fraction = 2.0 / 5.0;
inline constexpr double even_overlap_cap = 4.0 / 5.0;
}  // namespace bound_constants

// (k-s+1)/(2s+1): the degree below which a weight-s error pattern mostly meets
// rows outside its support. Decreasing in s; positive for s <= k/2.
[[nodiscard]] exact::Rat degree_threshold(std::uint32_t k, std::uint32_t s);
[[nodiscard]] std::uint32_t degree_threshold_ceil(std::uint32_t k, std::uint32_t s);

// Number of weight-d subsets of a k-set meeting a fixed s-subset in an even
// number of positions: sum over even i of C(s,i) * C(k-s,d-i).
[[nodiscard]] exact::Int even_overlap_count(std::uint32_t k, std::uint32_t s, std::uint32_t d);
// Complement: odd overlaps. even + odd == C(k, d).
[[nodiscard]] exact::Int odd_overlap_count(std::uint32_t k, std::uint32_t s, std::uint32_t d);

// even_overlap_count / C(k, d): probability that a uniform weight-d row has
// even overlap with a fixed weight-s pattern, i.e. leaves its parity intact.
[[nodiscard]] exact::Rat even_overlap_prob_exact(std::uint32_t k, std::uint32_t s, std::uint32_t d);
[[nodiscard]] double even_overlap_prob(std::uint32_t k, std::uint32_t s, std::uint32_t d);

// Closed-form piecewise cap on even_overlap_prob_exact; requires 1 <= d <= k-1.
// For s > k/2 the bound is applied with s replaced by k-s.
[[nodiscard]] exact::Rat even_overlap_upper(std::uint32_t k, std::uint32_t s, std::uint32_t d);

// Closed-form floor on the odd-overlap fraction 1 - even_overlap_prob_exact;
// same domain.
[[nodiscard]] exact::Rat odd_overlap_lower(std::uint32_t k, std::uint32_t s, std::uint32_t d);

// Per-measurement exponent of the union bound for a weight-s pattern:
//   mid_mass/5 + (2s/5) * (light-degree tail + heavy-degree tail),
// split at the ceiling of degree_threshold. Requires 1 <= s <= k/2.
[[nodiscard]] double union_exponent(const DegreeDistribution& dist, std::uint32_t s);
[[nodiscard]] exact::Rat union_exponent_exact(std::uint32_t k, const std::vector<exact::Rat>& probs,
                                              std::uint32_t s);

struct UnionBound {
  double value = 0.0;
  bool vacuous = false;  // true when the bound exceeds 1
};

// 2 * sum_{1 <= s <= k/2} exp(log C(k,s) - n * union_exponent(s)), evaluated
// in the log domain. Values above 1 are reported as-is with the vacuous flag.
[[nodiscard]] UnionBound union_bound_error_prob(const DegreeDistribution& dist, std::uint64_t n);

// (1 - dbar/k)^n: probability that a fixed input symbol joins none of n
// queries. A lower bound on the decoding error probability.
[[nodiscard]] double isolation_probability(const DegreeDistribution& dist, std::uint64_t n);

// ceil(c * max{k, k log k / dbar}), natural log.
[[nodiscard]] std::uint64_t sample_complexity_threshold(std::uint32_t k, double dbar, double c);

// Smallest n with (1 - dbar/k)^n <= k^-u: below this the isolation argument
// alone rules out error probability k^-u.
[[nodiscard]] std::uint64_t isolation_required_n(std::uint32_t k, double dbar, double u);

// log C(n, r) via lgamma.
[[nodiscard]] double log_binomial(std::uint64_t n, std::uint64_t r);

struct SweepFailure {
  std::uint32_t k = 0, s = 0, d = 0;
  std::string what;
};

struct OverlapSweepReport {
  std::uint64_t triples = 0;
  std::uint64_t checks = 0;
  std::vector<SweepFailure> failures;  // empty on success
  [[nodiscard]] bool pass() const noexcept { return failures.empty(); }
};

// Exhaustive exact verification, for 2 <= k <= max_k and all 1 <= s,d <= k-1,
// that even + odd overlap counts partition C(k,d), that even_overlap_upper
// really caps the even fraction, and that odd_overlap_lower really floors the
// odd fraction.
[[nodiscard]] OverlapSweepReport verify_overlap_bounds(std::uint32_t max_k);

struct ChainSweepReport {
  std::uint64_t cases = 0;
  std::vector<SweepFailure> failures;
  [[nodiscard]] bool pass() const noexcept { return failures.empty(); }
};

// Exact check that under a Soliton law the expected even-overlap probability
// never exceeds 1 - union_exponent, for all k <= max_k, D in 2..k, s <= k/2.
[[nodiscard]] ChainSweepReport verify_exponent_chain(std::uint32_t max_k);

struct UnionTermCheck {
  std::uint32_t s = 0;
  int case_id = 0;          // 1..4 by threshold regime (see verify_union_term_bounds)
  bool applicable = false;  // the case's sample-count hypothesis is met by n
  bool pass = false;
  double log_term = 0.0;  // log( C(k,s) * exp(-n * union_exponent(s)) )
  double log_cap = 0.0;
};

struct UnionTermReport {
  std::uint32_t k = 0, max_degree = 0;
  std::uint64_t n = 0;
  double dbar = 0.0;
  std::vector<UnionTermCheck> checks;  // one per 1 <= s <= k/2
  bool stirling_pass = true;           // C(k,s) <= (k/s)^(2s) for s < (k-2)/7
  bool case2_occurs = false;           // some s falls in the [4, D] regime
  [[nodiscard]] bool all_pass() const noexcept;
  [[nodiscard]] std::uint64_t skipped() const noexcept;
};

// Per-s verification that C(k,s) e^{-n Sigma_s} stays under its regime's cap
// for the Soliton law with the given truncation:
//   case 1: ceil(threshold) > D            -> k^-s        (needs n*dbar >= 5k log k)
//   case 2: 4 <= ceil(threshold) <= D      -> k^-s if s <= sqrt(k),
//                                             else 2^(-2 sqrt(k))  (needs n >= 68k)
//   case 3: ceil(threshold) == 3           -> 2^k e^-k    (needs n >= 35k)
//   case 4: ceil(threshold) <= 2           -> 2^k e^-k    (needs n >= 10k)
// Cases whose hypothesis n fails are reported as not applicable, not failed.
[[nodiscard]] UnionTermReport verify_union_term_bounds(std::uint32_t k, std::uint32_t max_degree,
                                                       std::uint64_t n);

}  // namespace fq
