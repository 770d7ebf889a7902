#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>

#include "fq/bounds.hpp"
#include "fq/codec.hpp"

using namespace fq;
using exact::Int;
using exact::Rat;

TEST_CASE("degree threshold values") {
  CHECK(degree_threshold(300, 1) == Rat(100));
  CHECK(degree_threshold(300, 150) == exact::ratio(151, 301));
  CHECK(degree_threshold_ceil(300, 150) == 1);
  CHECK(degree_threshold_ceil(300, 1) == 100);
}

TEST_CASE("ceil(threshold) >= 4 exactly when 7s < k - 2") {
  for (std::uint32_t k : {20u, 50u, 300u, 301u}) {
    for (std::uint32_t s = 1; s <= k / 2; ++s) {
      const bool left = degree_threshold_ceil(k, s) >= 4;
      const bool right = 7ULL * s < static_cast<std::uint64_t>(k) - 2;
      CHECK(left == right);
    }
  }
}

TEST_CASE("even overlap counts against subset enumeration") {
  // Oracle: walk every weight-d mask of k bits and count even intersections
  // with the pattern {0, ..., s-1}.
  const auto enumerate = [](std::uint32_t k, std::uint32_t s, std::uint32_t d) {
    std::uint64_t even = 0;
    const std::uint32_t pattern = (s == 32) ? ~0u : ((1u << s) - 1);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      if (static_cast<std::uint32_t>(std::popcount(mask)) != d) continue;
      if (std::popcount(mask & pattern) % 2 == 0) ++even;
    }
    return even;
  };

  CHECK(even_overlap_count(4, 2, 2) == Int(2));
  CHECK(even_overlap_count(3, 1, 2) == Int(1));
  CHECK(even_overlap_count(10, 0, 4) == exact::binomial(10, 4));

  for (std::uint32_t s = 0; s <= 10; ++s)
    for (std::uint32_t d = 1; d <= 10; ++d)
      CHECK(even_overlap_count(10, s, d) == Int(static_cast<unsigned long>(enumerate(10, s, d))));
}

TEST_CASE("even overlap probability examples") {
  CHECK(even_overlap_prob_exact(3, 1, 2) == exact::ratio(1, 3));
  CHECK(even_overlap_prob(10, 0, 3) == 1.0);
}

TEST_CASE("even overlap probability against Monte Carlo") {
  const std::uint32_t k = 12, s = 5, d = 4;
  const double exact_p = even_overlap_prob(k, s, d);
  const auto dist = DegreeDistribution::point_mass(k, d);
  QueryStream stream(dist);
  Rng g(4242);
  const int n = 1'000'000;
  int even = 0;
  for (int i = 0; i < n; ++i) {
    int overlap = 0;
    for (auto idx : stream.next(g)) overlap += idx < s;
    even += overlap % 2 == 0;
  }
  const double freq = static_cast<double>(even) / n;
  const double slack = 3.0 * std::sqrt(exact_p * (1 - exact_p) / n);
  CHECK(std::abs(freq - exact_p) <= slack);
}

TEST_CASE("odd overlap floor examples") {
  // k=10, s=5, d=5: beta = ceil(6/11) = 1 <= s <= k - beta, so the floor is 1/5.
  CHECK(odd_overlap_lower(10, 5, 5) == exact::ratio(1, 5));
  Rat odd_fraction(odd_overlap_count(10, 5, 5));
  odd_fraction /= Rat(exact::binomial(10, 5));
  CHECK(odd_fraction == exact::ratio(1, 2));
  CHECK(odd_fraction >= exact::ratio(1, 5));

  // k=10, s=1, d=1: beta = ceil(10/3) = 4 > s, alpha = 10 -> floor 2/(5*10).
  CHECK(odd_overlap_lower(10, 1, 1) == exact::ratio(1, 25));
  Rat f2(odd_overlap_count(10, 1, 1));
  f2 /= Rat(exact::binomial(10, 1));
  CHECK(f2 == exact::ratio(1, 10));
  CHECK(f2 >= exact::ratio(1, 25));
}

TEST_CASE("even overlap cap examples") {
  // k=4, s=2, d=2: threshold(2) = 3/5 <= d, so the cap is 4/5.
  CHECK(even_overlap_upper(4, 2, 2) == exact::ratio(4, 5));
  CHECK(even_overlap_prob_exact(4, 2, 2) == exact::ratio(1, 3));

  // k=10, s=1, d=1 < threshold(1) = 10/3: cap = 1 - 2/(5*10) = 0.96.
  CHECK(even_overlap_upper(10, 1, 1) == exact::ratio(24, 25));
  CHECK(even_overlap_prob_exact(10, 1, 1) == exact::ratio(9, 10));
}

TEST_CASE("overlap bound domain errors") {
  CHECK_THROWS_AS((void)even_overlap_upper(10, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)even_overlap_upper(10, 1, 10), std::invalid_argument);
  CHECK_THROWS_AS((void)odd_overlap_lower(10, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS((void)odd_overlap_lower(10, 10, 3), std::invalid_argument);
}

TEST_CASE("exhaustive overlap sweep up to k = 12") {
  const auto report = verify_overlap_bounds(12);
  CHECK(report.pass());
  CHECK(report.failures.empty());
  CHECK(report.triples > 0);
}

TEST_CASE("union exponent: all Soliton mass below the threshold") {
  const std::uint32_t k = 300, trunc = 31, s = 1;
  const auto dist = ideal_soliton(SolitonParams{k, trunc});
  REQUIRE(degree_threshold_ceil(k, s) > trunc);

  double tail = 0.0;
  for (std::uint32_t d = 1; d <= trunc; ++d)
    tail += static_cast<double>(d) * dist.prob(d) / (k - d + 1.0);
  const double expected = (2.0 * s / 5.0) * tail;

  const double got = union_exponent(dist, s);
  CHECK(got == doctest::Approx(expected).epsilon(1e-14));
  CHECK(got > 2.0 * s * dist.mean_degree() / (5.0 * k));
}

TEST_CASE("union exponent: threshold collapses to 1 at s = k/2") {
  const auto dist = ideal_soliton(SolitonParams{300, 31});
  REQUIRE(degree_threshold_ceil(300, 150) == 1);
  // Every supported degree lands in the middle range, so the exponent is 1/5.
  CHECK(union_exponent(dist, 150) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(union_exponent(dist, 150) >= 0.1);
}

TEST_CASE("exact exponent chain on a single case") {
  const std::uint32_t k = 20, trunc = 5, s = 3;
  const auto probs = exact::soliton_probs(SolitonParams{k, trunc});
  Rat expected_even(0);
  for (std::uint32_t d = 1; d <= trunc; ++d)
    expected_even += probs[d] * even_overlap_prob_exact(k, s, d);
  const Rat cap = Rat(1) - union_exponent_exact(k, probs, s);
  CHECK(expected_even <= cap);
}

TEST_CASE("exact exponent chain sweep up to k = 12") {
  const auto report = verify_exponent_chain(12);
  CHECK(report.pass());
  CHECK(report.cases > 0);
}

TEST_CASE("union bound flags vacuous values and decreases in n") {
  const auto dist = ideal_soliton(SolitonParams{100, 10});
  const auto at_zero = union_bound_error_prob(dist, 0);
  CHECK(at_zero.vacuous);
  CHECK(at_zero.value >= 1.0);

  double previous = at_zero.value;
  for (std::uint64_t n : {200ULL, 400ULL, 600ULL, 800ULL}) {
    const auto bound = union_bound_error_prob(dist, n);
    CHECK(bound.value < previous);
    previous = bound.value;
  }
  CHECK(!union_bound_error_prob(dist, 800).vacuous);
}

TEST_CASE("isolation probability") {
  const auto dist = DegreeDistribution::point_mass(100, 2);  // dbar = 2
  CHECK(isolation_probability(dist, 0) == 1.0);
  CHECK(isolation_probability(dist, 100) == doctest::Approx(0.13261955589475294).epsilon(1e-12));
}

TEST_CASE("isolation probability against simulation") {
  const std::uint32_t k = 30, trunc = 5;
  const auto dist = ideal_soliton(SolitonParams{k, trunc});
  const std::uint64_t n = 20;
  const double p = isolation_probability(dist, n);

  Rng g(6060);
  const int reps = 100'000;
  int isolated = 0;
  for (int i = 0; i < reps; ++i) {
    const InputVector x(k);
    const auto batch = generate_batch(x, dist, n, g);
    bool touched = false;
    for (std::size_t r = 0; r < n && !touched; ++r) touched = batch.matrix.get(r, 0);
    isolated += !touched;
  }
  const double freq = static_cast<double>(isolated) / reps;
  CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("mean-value floor for the isolation probability") {
  // (1 - r)^n >= exp(-a / (1 - a/n)) with a = n r, over a grid with r < 1.
  for (std::uint32_t k : {10u, 100u, 300u}) {
    for (double dbar : {1.0, 2.0, 5.0, k / 2.0}) {
      if (dbar >= k) continue;
      const std::uint64_t grid[] = {k / 2, k, 5ULL * k};
      for (std::uint64_t n : grid) {
        if (n == 0) continue;
        const double r = dbar / k;
        const double direct = std::pow(1.0 - r, static_cast<double>(n));
        const double alpha = static_cast<double>(n) * r;
        const double floor = std::exp(-alpha / (1.0 - alpha / static_cast<double>(n)));
        CHECK(direct >= floor * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("sample complexity threshold") {
  CHECK(sample_complexity_threshold(300, harmonic_number(31), 1.0) == 425);
  // dbar beyond log k switches the max to the linear branch.
  CHECK(sample_complexity_threshold(300, 6.0, 1.0) == 300);
  CHECK(sample_complexity_threshold(300, 6.0, 1.5) == 450);
  CHECK_THROWS_AS((void)sample_complexity_threshold(300, 4.0, 0.0), std::invalid_argument);
}

TEST_CASE("isolation-required sample count") {
  const std::uint32_t k = 100;
  const double dbar = harmonic_number(10);
  const double u = 1.0;
  const std::uint64_t n = isolation_required_n(k, dbar, u);
  const auto dist = ideal_soliton(SolitonParams{k, 10});
  const double target = std::pow(static_cast<double>(k), -u);
  CHECK(isolation_probability(dist, n) <= target * (1 + 1e-9));
  CHECK(isolation_probability(dist, n - 1) > target);
}

TEST_CASE("union term cases at k = 50, D = 10") {
  const std::uint32_t k = 50, trunc = 10;
  const double dbar = harmonic_number(trunc);
  const std::uint64_t n = std::max<std::uint64_t>(
      bound_constants::linear_factor_mid * k,
      static_cast<std::uint64_t>(std::ceil(5.0 * k * std::log(k) / dbar)));
  const auto report = verify_union_term_bounds(k, trunc, n);
  CHECK(report.all_pass());
  CHECK(report.skipped() == 0);
  CHECK(report.stirling_pass);
  CHECK(report.checks.size() == k / 2);
}

TEST_CASE("union term cases hold at small k with exact arithmetic inputs") {
  for (std::uint32_t trunc = 2; trunc <= 9; ++trunc) {
    const std::uint64_t n = 68 * 9 + 100;  // covers every linear hypothesis at k = 9
    const auto report = verify_union_term_bounds(9, trunc, n);
    INFO("trunc = ", trunc);
    CHECK(report.all_pass());
  }
}

TEST_CASE("the mid-threshold regime cannot occur for D in {2, 3}") {
  for (std::uint32_t trunc : {2u, 3u}) {
    const auto report = verify_union_term_bounds(50, trunc, 68 * 50);
    CHECK(!report.case2_occurs);
  }
  const auto with_case2 = verify_union_term_bounds(50, 10, 68 * 50);
  CHECK(with_case2.case2_occurs);
}

TEST_CASE("unmet hypotheses are skipped, not failed") {
  const auto report = verify_union_term_bounds(50, 10, 100);  // far below every hypothesis
  CHECK(report.skipped() > 0);
  CHECK(report.all_pass());  // no applicable check can fail
}
