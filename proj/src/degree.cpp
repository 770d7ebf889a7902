#include "fq/degree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fq {

namespace {

constexpr double kSumTolerance = 1e-12;

// Compensated (Kahan) summation keeps normalization and mean-degree errors at
// rounding level even for supports of several hundred degrees.
double kahan_sum(const std::vector<double>& terms) {
  double sum = 0.0, carry = 0.0;
  for (double t : terms) {
    const double y = t - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  }
  return sum;
}

}  // namespace

DegreeDistribution::DegreeDistribution(std::uint32_t k, std::vector<double> probs)
    : k_(k), probs_(std::move(probs)) {
  std::vector<double> weighted(probs_.size());
  for (std::uint32_t d = 0; d < probs_.size(); ++d) weighted[d] = d * probs_[d];
  dbar_ = kahan_sum(weighted);

  for (std::uint32_t d = 0; d <= k_; ++d)
    if (probs_[d] > 0.0) max_support_ = d;

  cdf_.resize(k_ + 1);
  double acc = 0.0;
  for (std::uint32_t d = 0; d <= k_; ++d) {
    acc += probs_[d];
    cdf_[d] = acc;
  }
}

DegreeDistribution DegreeDistribution::from_probs(std::uint32_t k, std::vector<double> probs) {
  if (k < 1) throw std::invalid_argument("DegreeDistribution: k must be >= 1");
  if (probs.size() != static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("DegreeDistribution: need k+1 probabilities (degrees 0..k)");
  if (probs[0] != 0.0)
    throw std::invalid_argument("DegreeDistribution: degree 0 must have probability 0");
  for (double p : probs)
    if (!(p >= 0.0)) throw std::invalid_argument("DegreeDistribution: negative probability");
  const double sum = kahan_sum(probs);
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument("DegreeDistribution: probabilities sum to " + std::to_string(sum));
  return DegreeDistribution(k, std::move(probs));
}

DegreeDistribution DegreeDistribution::point_mass(std::uint32_t k, std::uint32_t degree) {
  if (degree < 1 || degree > k)
    throw std::invalid_argument("DegreeDistribution::point_mass: degree out of range");
  std::vector<double> probs(k + 1, 0.0);
  probs[degree] = 1.0;
  return DegreeDistribution(k, std::move(probs));
}

DegreeDistribution ideal_soliton(const SolitonParams& params) {
  if (params.k < 3) throw std::invalid_argument("ideal_soliton: k must be >= 3");
  if (params.max_degree < 2 || params.max_degree > params.k)
    throw std::invalid_argument("ideal_soliton: truncation degree must lie in {2, ..., k}");
  std::vector<double> probs(params.k + 1, 0.0);
  probs[1] = 1.0 / params.max_degree;
  for (std::uint32_t d = 2; d <= params.max_degree; ++d)
    probs[d] = 1.0 / (static_cast<double>(d) * (d - 1));
  return DegreeDistribution::from_probs(params.k, std::move(probs));
}

double query_difficulty(const DegreeDistribution& dist) { return dist.mean_degree(); }

double harmonic_number(std::uint32_t m) {
  // Summed smallest-first with compensation.
  double sum = 0.0, carry = 0.0;
  for (std::uint32_t i = m; i >= 1; --i) {
    const double y = 1.0 / i - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  }
  return sum;
}

SolitonFit soliton_for_difficulty(std::uint32_t k, double target_difficulty) {
  if (k < 3) throw std::invalid_argument("soliton_for_difficulty: k must be >= 3");
  const double lo = 1.5;  // H_2
  const double hi = harmonic_number(k);
  if (!(target_difficulty >= lo - kSumTolerance && target_difficulty <= hi + kSumTolerance))
    throw std::invalid_argument("soliton_for_difficulty: target outside [H_2, H_k]");

  std::uint32_t best = 2;
  double h = 1.5, best_diff = std::abs(h - target_difficulty);
  for (std::uint32_t d = 3; d <= k; ++d) {
    h += 1.0 / d;
    const double diff = std::abs(h - target_difficulty);
    if (diff < best_diff) {
      best = d;
      best_diff = diff;
    }
  }
  return SolitonFit{SolitonParams{k, best}, harmonic_number(best)};
}

std::uint32_t sample_degree(const DegreeDistribution& dist, Rng& g) {
  const double u = uniform_unit(g);
  const auto& cdf = dist.cdf_;
  // Search only up to the last supported degree so trailing rounding noise in
  // the cdf can never select a zero-probability degree.
  const auto end = cdf.begin() + dist.max_support_ + 1;
  const auto it = std::upper_bound(cdf.begin(), end, u);
  if (it == end) return dist.max_support_;
  return static_cast<std::uint32_t>(it - cdf.begin());
}

}  // namespace fq
