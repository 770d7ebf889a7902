#pragma once

#include <cstdint>
#include <vector>

#include "fq/rng.hpp"

namespace fq {

// Parameters of the truncated ideal Soliton family: support {1, ..., max_degree}.
struct SolitonParams {
  std::uint32_t k = 0;           // number of input symbols, >= 3
  std::uint32_t max_degree = 0;  // truncation degree D, in {2, ..., k}
};

// Probability law of the output-node degree. probs()[d] is the probability of
// a query touching exactly d input symbols; degree 0 is structurally excluded.
// Immutable once built and safe to share across threads.
class DegreeDistribution {
 public:
  static DegreeDistribution from_probs(std::uint32_t k, std::vector<double> probs);
  static DegreeDistribution point_mass(std::uint32_t k, std::uint32_t degree);

  [[nodiscard]] std::uint32_t k() const noexcept { return k_; }
  [[nodiscard]] const std::vector<double>& probs() const noexcept { return probs_; }
  [[nodiscard]] double prob(std::uint32_t d) const { return probs_.at(d); }

  // Query difficulty: the expected number of input symbols per measurement.
  [[nodiscard]] double mean_degree() const noexcept { return dbar_; }

  // Largest degree with positive probability.
  [[nodiscard]] std::uint32_t max_support() const noexcept { return max_support_; }

 private:
  friend std::uint32_t sample_degree(const DegreeDistribution&, Rng&);

  DegreeDistribution(std::uint32_t k, std::vector<double> probs);

  std::uint32_t k_ = 0;
  std::vector<double> probs_;
  double dbar_ = 0.0;
  std::uint32_t max_support_ = 0;
  std::vector<double> cdf_;  // cdf_[d] = P(degree <= d)
};

// Truncated ideal Soliton law: P(1) = 1/D, P(d) = 1/(d(d-1)) for 2 <= d <= D.
[[nodiscard]] DegreeDistribution ideal_soliton(const SolitonParams& params);

// Same as dist.mean_degree(). For the Soliton family with truncation D this
// equals the harmonic number H_D.
[[nodiscard]] double query_difficulty(const DegreeDistribution& dist);

// H_m = 1 + 1/2 + ... + 1/m.
[[nodiscard]] double harmonic_number(std::uint32_t m);

struct SolitonFit {
  SolitonParams params;
  double achieved_difficulty = 0.0;  // H_D for the chosen truncation
};

// Soliton parameters whose difficulty H_D is nearest the target, ties broken
// toward smaller D. The target must lie in [H_2, H_k].
[[nodiscard]] SolitonFit soliton_for_difficulty(std::uint32_t k, double target_difficulty);

// Draws a degree d with probability probs()[d] (cumulative table + binary search).
[[nodiscard]] std::uint32_t sample_degree(const DegreeDistribution& dist, Rng& g);

}  // namespace fq
