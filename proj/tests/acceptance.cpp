// End-to-end acceptance suite. Runs every criterion at its stated tolerance
// and prints one pass/fail line per criterion; exits nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fq/bounds.hpp"
#include "fq/codec.hpp"
#include "fq/degree.hpp"
#include "fq/experiment.hpp"
#include "fq/gf2.hpp"

using namespace fq;

namespace {

constexpr std::uint64_t kMasterSeed = 20250810ULL;
constexpr double kZ99 = 2.5758293035489004;  // two-sided 1% quantile

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned worker_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double two_proportion_z(std::uint64_t f1, std::uint64_t n1, std::uint64_t f2, std::uint64_t n2) {
  const double p1 = static_cast<double>(f1) / n1;
  const double p2 = static_cast<double>(f2) / n2;
  const double pooled = static_cast<double>(f1 + f2) / static_cast<double>(n1 + n2);
  const double var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
  if (var <= 0.0) return 0.0;
  return (p1 - p2) / std::sqrt(var);
}

// ---------------------------------------------------------------------------
// 1. Phase transition at k = 300, D = 31: the 0.5 crossing of the empirical
//    failure rate sits in normalized [0.8, 1.2] and P_e <= 0.05 at 1.3.
Outcome criterion_phase_transition() {
  ExperimentConfig config;
  config.k = 300;
  config.truncation_degrees = {31};
  for (int i = 0; i <= 10; ++i) config.normalized_grid.push_back(0.5 + 0.1 * i);
  config.trials = 5000;
  config.master_seed = kMasterSeed;
  config.threads = worker_threads();

  const auto records = run_sweep(config);
  const auto crossing = estimate_transition(records);
  if (!crossing) return {false, "failure rate never crosses 0.5 on the grid"};

  const double pe_13 = records[8].p_hat;  // grid point 1.3
  const bool pass = *crossing >= 0.8 && *crossing <= 1.2 && pe_13 <= 0.05;
  return {pass, fmt("crossing=%.4f (need [0.8,1.2]); Pe(1.3)=%.4f (need <=0.05)", *crossing,
                    pe_13)};
}

// ---------------------------------------------------------------------------
// 2. Difficulty ordering at un-normalized n = 450: higher D gives a lower
//    failure rate, with non-overlapping 95% Wilson intervals. Overlap at 5000
//    trials triggers a 20000-trial re-run before judging.
Outcome criterion_difficulty_ordering() {
  const auto run = [](std::uint64_t trials) {
    ExperimentConfig config;
    config.k = 300;
    config.truncation_degrees = {31, 62, 150};
    config.n_grid = {450};
    config.trials = trials;
    config.master_seed = kMasterSeed + 2;
    config.threads = worker_threads();
    return run_sweep(config);
  };

  const auto ordered = [](const std::vector<ExperimentRecord>& r) {
    // records arrive as D = 31, 62, 150
    const bool order = r[2].p_hat < r[1].p_hat && r[1].p_hat < r[0].p_hat;
    const bool separated = r[2].ci_high < r[1].ci_low && r[1].ci_high < r[0].ci_low;
    return order && separated;
  };

  auto records = run(5000);
  bool pass = ordered(records);
  std::uint64_t trials = 5000;
  if (!pass) {
    trials = 20000;
    records = run(trials);
    pass = ordered(records);
  }
  return {pass, fmt("n=450, trials=%llu: Pe(D=31)=%.4f [%.4f,%.4f], Pe(62)=%.4f [%.4f,%.4f], "
                    "Pe(150)=%.4f [%.4f,%.4f]",
                    static_cast<unsigned long long>(trials), records[0].p_hat, records[0].ci_low,
                    records[0].ci_high, records[1].p_hat, records[1].ci_low, records[1].ci_high,
                    records[2].p_hat, records[2].ci_low, records[2].ci_high)};
}

// ---------------------------------------------------------------------------
// 3. Exhaustive exact soundness of the overlap bounds for every k <= 20,
//    1 <= s, d <= k-1, plus the exact expected-even-overlap chain; under 2 min.
Outcome criterion_overlap_sweep() {
  const auto start = std::chrono::steady_clock::now();
  const auto overlap = verify_overlap_bounds(20);
  const auto chain = verify_exponent_chain(20);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = overlap.pass() && chain.pass() && elapsed < 120.0;
  return {pass, fmt("%llu triples / %llu checks, %llu chain cases, %zu+%zu counterexamples, %.1fs",
                    static_cast<unsigned long long>(overlap.triples),
                    static_cast<unsigned long long>(overlap.checks),
                    static_cast<unsigned long long>(chain.cases), overlap.failures.size(),
                    chain.failures.size(), elapsed)};
}

// ---------------------------------------------------------------------------
// 4. Union-term case bounds at (k, D) in {(50,10), (100,20), (200,31)} with n
//    meeting every hypothesis, plus the "no mid regime for D in {2,3}" remark.
Outcome criterion_union_terms() {
  struct Pair {
    std::uint32_t k, trunc;
  };
  const Pair pairs[] = {{50, 10}, {100, 20}, {200, 31}};
  std::string detail;
  bool pass = true;
  for (const auto& pair : pairs) {
    const double dbar = harmonic_number(pair.trunc);
    const std::uint64_t n = std::max<std::uint64_t>(
        bound_constants::linear_factor_mid * pair.k,
        static_cast<std::uint64_t>(std::ceil(bound_constants::isolation_log_factor * pair.k *
                                             std::log(static_cast<double>(pair.k)) / dbar)));
    const auto report = verify_union_term_bounds(pair.k, pair.trunc, n);
    const bool ok = report.all_pass() && report.skipped() == 0 && report.stirling_pass;
    pass = pass && ok;
    detail += fmt("(k=%u,D=%u,n=%llu):%s ", pair.k, pair.trunc,
                  static_cast<unsigned long long>(n), ok ? "ok" : "FAIL");
  }
  for (std::uint32_t trunc : {2u, 3u}) {
    const auto report = verify_union_term_bounds(50, trunc, 68 * 50);
    const bool ok = !report.case2_occurs && report.all_pass();
    pass = pass && ok;
    detail += fmt("(D=%u no-mid-regime):%s ", trunc, ok ? "ok" : "FAIL");
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 5. ML decoder verdicts match exhaustive 2^k search for every k <= 12 over
//    500 random batches each.
Outcome criterion_decoder_oracle() {
  std::uint64_t batches = 0, mismatches = 0;
  for (std::uint32_t k = 3; k <= 12; ++k) {
    for (int i = 0; i < 500; ++i) {
      Rng g(derive_seed(kMasterSeed + 5, {k, static_cast<std::uint64_t>(i)}));
      const auto trunc = 2 + static_cast<std::uint32_t>(uniform_below(g, k - 1));
      const auto dist = ideal_soliton(SolitonParams{k, trunc});
      const InputVector x = BitVector::random(k, g);
      const std::uint64_t n = (i % 3 == 0) ? std::max<std::uint64_t>(1, k / 2)
                                           : (i % 3 == 1 ? k : 2ULL * k);
      const auto batch = generate_batch(x, dist, n, g);
      ++batches;

      std::uint64_t solutions = 0;
      InputVector witness;
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        InputVector candidate(k);
        for (std::uint32_t b = 0; b < k; ++b) candidate.set(b, (bits >> b) & 1);
        if (multiply(batch.matrix, candidate) == batch.answers) {
          if (solutions == 0) witness = candidate;
          ++solutions;
        }
      }

      const auto got = ml_decode(batch);
      bool ok = solutions >= 1;
      if (solutions == 1)
        ok = ok && got.kind == DecodeKind::Unique && got.solution == witness &&
             got.solution == x;
      else
        ok = ok && got.kind == DecodeKind::Ambiguous &&
             (std::uint64_t{1} << got.free_vars) == solutions;
      mismatches += !ok;
    }
  }
  return {mismatches == 0, fmt("%llu batches, %llu verdict mismatches",
                               static_cast<unsigned long long>(batches),
                               static_cast<unsigned long long>(mismatches))};
}

// ---------------------------------------------------------------------------
// 6. Bound bracketing at k = 100, D = 10: wherever the union bound is <= 1 the
//    empirical failure rate stays under bound + 3 sigma (10^4 trials), and
//    every trial with an isolated input yields an Ambiguous verdict.
Outcome criterion_bound_bracket() {
  const std::uint32_t k = 100, trunc = 10;
  const auto dist = ideal_soliton(SolitonParams{k, trunc});
  const std::uint64_t trials = 10000;
  // n = 120 sits far below the transition: the union bound is vacuous there,
  // but isolated inputs actually occur, exercising the mechanism check.
  const std::vector<std::uint64_t> grid = {120, 400, 450, 500, 550, 600, 700};

  bool bracket_ok = true;
  std::uint64_t checked_points = 0, isolated_total = 0, isolated_ambiguous = 0;
  std::string detail;
  for (std::uint64_t n : grid) {
    const auto bound = union_bound_error_prob(dist, n);
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const auto d = run_trial_detailed(dist, n, derive_seed(kMasterSeed + 6, {n, t}));
      failures += !d.success;
      if (d.isolated_input) {
        ++isolated_total;
        isolated_ambiguous += d.verdict == DecodeKind::Ambiguous;
      }
    }
    if (bound.vacuous) continue;
    ++checked_points;
    const double p_hat = static_cast<double>(failures) / trials;
    const double sigma = std::sqrt(p_hat * (1.0 - p_hat) / trials);
    const bool ok = p_hat <= bound.value + 3.0 * sigma;
    bracket_ok = bracket_ok && ok;
    detail += fmt("n=%llu: Pe=%.4f bound=%.4f%s ", static_cast<unsigned long long>(n), p_hat,
                  bound.value, ok ? "" : " VIOLATED");
  }
  const bool isolation_ok = isolated_total > 0 && isolated_ambiguous == isolated_total;
  detail += fmt("| isolated=%llu all-ambiguous=%s",
                static_cast<unsigned long long>(isolated_total), isolation_ok ? "yes" : "NO");
  return {bracket_ok && isolation_ok && checked_points > 0, detail};
}

// ---------------------------------------------------------------------------
// 7. Rateless/erasure invariance: success rates at p in {0, 0.3, 0.6} with a
//    fixed received count are indistinguishable (|z| < 2.576, 10^4 trials each).
Outcome criterion_erasure_invariance() {
  const std::uint32_t k = 100, trunc = 10;
  const auto dist = ideal_soliton(SolitonParams{k, trunc});
  const std::uint64_t stop_n = sample_complexity_threshold(k, harmonic_number(trunc), 1.2);
  const std::uint64_t trials = 10000;
  const double ps[] = {0.0, 0.3, 0.6};

  std::uint64_t failures[3] = {0, 0, 0};
  for (int pi = 0; pi < 3; ++pi) {
    const std::optional<double> p =
        ps[pi] > 0.0 ? std::optional<double>(ps[pi]) : std::nullopt;
    for (std::uint64_t t = 0; t < trials; ++t)
      failures[pi] += !run_trial(dist, stop_n, derive_seed(kMasterSeed + 7, {(std::uint64_t)pi, t}),
                                 Decoder::Ml, p);
  }

  bool pass = true;
  std::string detail = fmt("stop_n=%llu: ", static_cast<unsigned long long>(stop_n));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const double z = two_proportion_z(failures[a], trials, failures[b], trials);
      pass = pass && std::abs(z) < kZ99;
      detail += fmt("z(p=%.1f,p=%.1f)=%.2f ", ps[a], ps[b], z);
    }
  detail += fmt("| Pe={%.4f,%.4f,%.4f}", failures[0] / 10000.0, failures[1] / 10000.0,
                failures[2] / 10000.0);
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 8. Determinism: byte-identical CSV (timing column excluded) at 1 thread and
//    at full parallelism.
Outcome criterion_determinism() {
  ExperimentConfig config;
  config.k = 100;
  config.truncation_degrees = {5, 10};
  config.normalized_grid = {0.8, 1.0, 1.2};
  config.trials = 400;
  config.master_seed = kMasterSeed + 8;

  config.threads = 1;
  const auto serial = run_sweep(config);
  config.threads = std::max(2u, worker_threads());
  const auto parallel = run_sweep(config);

  const auto csv_without_timing = [](const std::vector<ExperimentRecord>& records) {
    std::ostringstream full;
    write_records_csv(records, full, /*include_elapsed=*/true);
    std::istringstream in(full.str());
    std::ostringstream stripped;
    std::string line;
    while (std::getline(in, line)) {
      const auto cut = line.rfind(',');
      stripped << line.substr(0, cut) << '\n';  // drop the trailing timing field
    }
    return stripped.str();
  };

  const std::string a = csv_without_timing(serial);
  const std::string b = csv_without_timing(parallel);
  return {a == b, fmt("%zu records, csv %s", serial.size(), a == b ? "identical" : "DIFFERS")};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      wanted.push_back(std::atoi(argv[++i]));
  }

  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {1, "phase-transition", criterion_phase_transition},
      {2, "difficulty-ordering", criterion_difficulty_ordering},
      {3, "overlap-bound-sweep", criterion_overlap_sweep},
      {4, "union-term-cases", criterion_union_terms},
      {5, "decoder-oracle", criterion_decoder_oracle},
      {6, "bound-bracketing", criterion_bound_bracket},
      {7, "erasure-invariance", criterion_erasure_invariance},
      {8, "determinism", criterion_determinism},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), entry.id) == wanted.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = entry.run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", entry.id,
                entry.name, outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}
