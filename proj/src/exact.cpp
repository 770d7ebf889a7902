#include "fq/exact.hpp"

#include <stdexcept>

namespace fq::exact {

Rat ratio(long num, long den) {
  if (den == 0) throw std::invalid_argument("ratio: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Int binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return Int(0);
  Int result;
  mpz_bin_uiui(result.get_mpz_t(), n, r);
  return result;
}

Rat harmonic(std::uint32_t m) {
  Rat sum(0);
  for (std::uint32_t i = 1; i <= m; ++i) sum += ratio(1, static_cast<long>(i));
  return sum;
}

std::vector<Rat> soliton_probs(const SolitonParams& params) {
  if (params.k < 3) throw std::invalid_argument("soliton_probs: k must be >= 3");
  if (params.max_degree < 2 || params.max_degree > params.k)
    throw std::invalid_argument("soliton_probs: truncation degree must lie in {2, ..., k}");
  std::vector<Rat> probs(params.k + 1, Rat(0));
  probs[1] = ratio(1, static_cast<long>(params.max_degree));
  for (std::uint32_t d = 2; d <= params.max_degree; ++d)
    probs[d] = ratio(1, static_cast<long>(d) * static_cast<long>(d - 1));
  return probs;
}

Rat mean_degree(const std::vector<Rat>& probs) {
  Rat sum(0);
  for (std::size_t d = 1; d < probs.size(); ++d) sum += Rat(static_cast<unsigned long>(d)) * probs[d];
  return sum;
}

double to_double(const Rat& q) { return mpq_get_d(q.get_mpq_t()); }

}  // namespace fq::exact
