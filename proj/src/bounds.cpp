#include "fq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fq {

namespace {

constexpr std::size_t kMaxReportedFailures = 20;

void check_pattern_domain(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  if (k < 2) throw std::invalid_argument("overlap bound: k must be >= 2");
  if (s < 1 || s > k - 1) throw std::invalid_argument("overlap bound: need 1 <= s <= k-1");
  if (d < 1 || d > k - 1) throw std::invalid_argument("overlap bound: need 1 <= d <= k-1");
}

std::int64_t ceil_div(std::int64_t num, std::int64_t den) { return (num + den - 1) / den; }

}  // namespace

exact::Rat degree_threshold(std::uint32_t k, std::uint32_t s) {
  if (s < 1 || s > k) throw std::invalid_argument("degree_threshold: need 1 <= s <= k");
  return exact::ratio(static_cast<long>(k) - static_cast<long>(s) + 1, 2L * s + 1);
}

std::uint32_t degree_threshold_ceil(std::uint32_t k, std::uint32_t s) {
  if (s < 1 || s > k) throw std::invalid_argument("degree_threshold_ceil: need 1 <= s <= k");
  const std::int64_t num = static_cast<std::int64_t>(k) - s + 1;
  return static_cast<std::uint32_t>(ceil_div(num, 2LL * s + 1));
}

exact::Int even_overlap_count(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  if (s > k) throw std::invalid_argument("even_overlap_count: need s <= k");
  if (d < 1 || d > k) throw std::invalid_argument("even_overlap_count: need 1 <= d <= k");
  exact::Int sum(0);
  for (std::uint32_t i = 0; i <= std::min(s, d); i += 2) {
    if (d - i > k - s) continue;
    sum += exact::binomial(s, i) * exact::binomial(k - s, d - i);
  }
  return sum;
}

exact::Int odd_overlap_count(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  if (s > k) throw std::invalid_argument("odd_overlap_count: need s <= k");
  if (d < 1 || d > k) throw std::invalid_argument("odd_overlap_count: need 1 <= d <= k");
  exact::Int sum(0);
  for (std::uint32_t i = 1; i <= std::min(s, d); i += 2) {
    if (d - i > k - s) continue;
    sum += exact::binomial(s, i) * exact::binomial(k - s, d - i);
  }
  return sum;
}

exact::Rat even_overlap_prob_exact(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  exact::Rat q(even_overlap_count(k, s, d));
  q /= exact::Rat(exact::binomial(k, d));
  return q;
}

double even_overlap_prob(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  return exact::to_double(even_overlap_prob_exact(k, s, d));
}

exact::Rat even_overlap_upper(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  check_pattern_domain(k, s, d);
  const std::int64_t sr = std::min<std::int64_t>(s, static_cast<std::int64_t>(k) - s);
  const std::int64_t kk = k, dd = d;
  if (2 * dd <= kk) {
    // Light rows: below the threshold the even fraction stays near 1 but is
    // pushed down by ~2*s*d/(5(k-d+1)); at or above it, 4/5 suffices.
    if (dd * (2 * sr + 1) < kk - sr + 1) {
      const std::int64_t den = 5 * (kk - dd + 1);
      return exact::ratio(den - 2 * sr * dd, den);
    }
    return exact::ratio(4, 5);
  }
  // Heavy rows: the mirrored regime, parameterized by k-d.
  if ((kk - dd) * (2 * sr + 1) < kk - sr + 1) {
    const std::int64_t den = 5 * (dd + 1);
    return exact::ratio(den - 2 * sr * (kk - dd), den);
  }
  return exact::ratio(4, 5);
}

exact::Rat odd_overlap_lower(std::uint32_t k, std::uint32_t s, std::uint32_t d) {
  check_pattern_domain(k, s, d);
  const std::int64_t kk = k, dd = d, ss = s;
  // alpha = max{(k-d+1)/d, (d+1)/(k-d)}; beta = ceil(max of the half-slopes).
  const bool first_larger = (kk - dd + 1) * (kk - dd) >= dd * (dd + 1);
  const std::int64_t alpha_num = first_larger ? kk - dd + 1 : dd + 1;
  const std::int64_t alpha_den = first_larger ? dd : kk - dd;
  const std::int64_t beta = std::max(ceil_div(kk - dd + 1, 2 * dd + 1),
                                     ceil_div(dd + 1, 2 * (kk - dd) + 1));
  if (ss < beta) return exact::ratio(2 * ss * alpha_den, 5 * alpha_num);
  if (ss <= kk - beta) return exact::ratio(1, 5);
  return exact::ratio(2 * (kk - ss) * alpha_den, 5 * alpha_num);
}

double union_exponent(const DegreeDistribution& dist, std::uint32_t s) {
  const std::uint32_t k = dist.k();
  if (s < 1 || 2ULL * s > k) throw std::invalid_argument("union_exponent: need 1 <= s <= k/2");
  const auto& p = dist.probs();
  const std::uint32_t ct = degree_threshold_ceil(k, s);

  double mid = 0.0;
  for (std::uint32_t d = ct; d + ct <= k; ++d) mid += p[d];
  double light = 0.0;
  for (std::uint32_t d = 1; d < ct && d <= k; ++d)
    light += static_cast<double>(d) * p[d] / (k - d + 1.0);
  double heavy = 0.0;
  for (std::uint32_t d = (ct <= k ? k - ct + 1 : 1); d <= k; ++d)
    heavy += static_cast<double>(k - d) * p[d] / (d + 1.0);

  using namespace bound_constants;
  return mid_mass_fraction * mid + tail_fraction * s * (light + heavy);
}

exact::Rat union_exponent_exact(std::uint32_t k, const std::vector<exact::Rat>& probs,
                                std::uint32_t s) {
  if (probs.size() != static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("union_exponent_exact: need k+1 probabilities");
  if (s < 1 || 2ULL * s > k)
    throw std::invalid_argument("union_exponent_exact: need 1 <= s <= k/2");
  const std::uint32_t ct = degree_threshold_ceil(k, s);

  exact::Rat mid(0), light(0), heavy(0);
  for (std::uint32_t d = ct; d + ct <= k; ++d) mid += probs[d];
  for (std::uint32_t d = 1; d < ct && d <= k; ++d)
    light += exact::Rat(static_cast<unsigned long>(d)) * probs[d] /
             exact::Rat(static_cast<unsigned long>(k - d + 1));
  for (std::uint32_t d = (ct <= k ? k - ct + 1 : 1); d <= k; ++d)
    heavy += exact::Rat(static_cast<unsigned long>(k - d)) * probs[d] /
             exact::Rat(static_cast<unsigned long>(d + 1));

  return exact::ratio(1, 5) * mid +
         exact::ratio(2, 5) * exact::Rat(static_cast<unsigned long>(s)) * (light + heavy);
}

UnionBound union_bound_error_prob(const DegreeDistribution& dist, std::uint64_t n) {
  const std::uint32_t k = dist.k();
  double sum = 0.0;
  for (std::uint32_t s = 1; 2ULL * s <= k; ++s) {
    const double exponent = union_exponent(dist, s);
    sum += std::exp(log_binomial(k, s) - static_cast<double>(n) * exponent);
  }
  const double value = 2.0 * sum;
  return UnionBound{value, !(value <= 1.0)};
}

double isolation_probability(const DegreeDistribution& dist, std::uint64_t n) {
  const double r = dist.mean_degree() / dist.k();
  if (r > 1.0) throw std::invalid_argument("isolation_probability: mean degree exceeds k");
  if (n == 0) return 1.0;
  return std::pow(1.0 - r, static_cast<double>(n));
}

std::uint64_t sample_complexity_threshold(std::uint32_t k, double dbar, double c) {
  if (k < 3) throw std::invalid_argument("sample_complexity_threshold: k must be >= 3");
  if (!(dbar >= 1.0)) throw std::invalid_argument("sample_complexity_threshold: dbar must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("sample_complexity_threshold: c must be > 0");
  const double base = std::max(static_cast<double>(k), k * std::log(k) / dbar);
  return static_cast<std::uint64_t>(std::ceil(c * base));
}

std::uint64_t isolation_required_n(std::uint32_t k, double dbar, double u) {
  if (k < 3) throw std::invalid_argument("isolation_required_n: k must be >= 3");
  if (!(dbar >= 1.0 && dbar < k))
    throw std::invalid_argument("isolation_required_n: need 1 <= dbar < k");
  if (!(u > 0.0)) throw std::invalid_argument("isolation_required_n: u must be > 0");
  return static_cast<std::uint64_t>(std::ceil(u * std::log(k) / -std::log1p(-dbar / k)));
}

double log_binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

OverlapSweepReport verify_overlap_bounds(std::uint32_t max_k) {
  OverlapSweepReport report;
  const auto fail = [&report](std::uint32_t k, std::uint32_t s, std::uint32_t d,
                              const char* what) {
    if (report.failures.size() < kMaxReportedFailures)
      report.failures.push_back(SweepFailure{k, s, d, what});
  };
  for (std::uint32_t k = 2; k <= max_k; ++k) {
    for (std::uint32_t s = 1; s <= k - 1; ++s) {
      for (std::uint32_t d = 1; d <= k - 1; ++d) {
        ++report.triples;
        const exact::Int total = exact::binomial(k, d);
        const exact::Int even = even_overlap_count(k, s, d);
        const exact::Int odd = odd_overlap_count(k, s, d);
        ++report.checks;
        if (even + odd != total) fail(k, s, d, "even/odd counts do not partition C(k,d)");
        ++report.checks;
        if (exact::Rat(even) > even_overlap_upper(k, s, d) * exact::Rat(total))
          fail(k, s, d, "even-overlap upper bound violated");
        ++report.checks;
        if (exact::Rat(odd) < odd_overlap_lower(k, s, d) * exact::Rat(total))
          fail(k, s, d, "odd-overlap lower bound violated");
      }
    }
  }
  return report;
}

ChainSweepReport verify_exponent_chain(std::uint32_t max_k) {
  ChainSweepReport report;
  for (std::uint32_t k = 3; k <= max_k; ++k) {
    const std::uint32_t s_max = k / 2;
    // Even-overlap probabilities are shared by every truncation at this k.
    std::vector<std::vector<exact::Rat>> even_prob(s_max + 1);
    for (std::uint32_t s = 1; s <= s_max; ++s) {
      even_prob[s].resize(k + 1);
      for (std::uint32_t d = 1; d <= k; ++d) even_prob[s][d] = even_overlap_prob_exact(k, s, d);
    }
    for (std::uint32_t trunc = 2; trunc <= k; ++trunc) {
      const auto probs = exact::soliton_probs(SolitonParams{k, trunc});
      for (std::uint32_t s = 1; s <= s_max; ++s) {
        ++report.cases;
        exact::Rat expected_even(0);
        for (std::uint32_t d = 1; d <= trunc; ++d) expected_even += probs[d] * even_prob[s][d];
        const exact::Rat cap = exact::Rat(1) - union_exponent_exact(k, probs, s);
        if (expected_even > cap && report.failures.size() < kMaxReportedFailures)
          report.failures.push_back(
              SweepFailure{k, s, trunc, "expected even-overlap probability exceeds 1 - exponent"});
      }
    }
  }
  return report;
}

bool UnionTermReport::all_pass() const noexcept {
  if (!stirling_pass) return false;
  for (const auto& c : checks)
    if (c.applicable && !c.pass) return false;
  return true;
}

std::uint64_t UnionTermReport::skipped() const noexcept {
  std::uint64_t count = 0;
  for (const auto& c : checks) count += !c.applicable;
  return count;
}

UnionTermReport verify_union_term_bounds(std::uint32_t k, std::uint32_t max_degree,
                                         std::uint64_t n) {
  const auto probs = exact::soliton_probs(SolitonParams{k, max_degree});
  UnionTermReport report;
  report.k = k;
  report.max_degree = max_degree;
  report.n = n;
  report.dbar = exact::to_double(exact::mean_degree(probs));

  const double log_k = std::log(static_cast<double>(k));
  const double nd = static_cast<double>(n);
  using namespace bound_constants;

  for (std::uint32_t s = 1; 2ULL * s <= k; ++s) {
    UnionTermCheck check;
    check.s = s;
    const std::uint32_t ct = degree_threshold_ceil(k, s);
    if (ct > max_degree) {
      check.case_id = 1;
      check.applicable = nd * report.dbar >= isolation_log_factor * k * log_k;
      check.log_cap = -static_cast<double>(s) * log_k;
    } else if (ct >= 4) {
      check.case_id = 2;
      check.applicable = n >= linear_factor_mid * k;
      const bool small_s = static_cast<std::uint64_t>(s) * s <= k;  // s <= sqrt(k)
      check.log_cap = small_s ? -static_cast<double>(s) * log_k
                              : -2.0 * std::sqrt(static_cast<double>(k)) * std::log(2.0);
    } else if (ct == 3) {
      check.case_id = 3;
      check.applicable = n >= linear_factor_three * k;
      check.log_cap = k * std::log(2.0) - static_cast<double>(k);
    } else {
      check.case_id = 4;
      check.applicable = n >= linear_factor_low * k;
      check.log_cap = k * std::log(2.0) - static_cast<double>(k);
    }
    const double exponent = exact::to_double(union_exponent_exact(k, probs, s));
    check.log_term = log_binomial(k, s) - nd * exponent;
    check.pass = (check.case_id == 1) ? (check.log_term < check.log_cap)
                                      : (check.log_term <= check.log_cap);
    if (check.case_id == 2) report.case2_occurs = true;
    report.checks.push_back(check);
  }

  // Stirling-based binomial cap used by the mid regime:
  // C(k,s) <= (k/s)^(2s) whenever 7s < k-2.
  for (std::uint32_t s = 1; 7ULL * s < static_cast<std::uint64_t>(k) - 2; ++s) {
    const double lhs = log_binomial(k, s);
    const double rhs = 2.0 * s * (log_k - std::log(static_cast<double>(s)));
    if (lhs > rhs) report.stirling_pass = false;
  }
  return report;
}

}  // namespace fq
