#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fq/codec.hpp"
#include "fq/degree.hpp"
#include "fq/gf2.hpp"

namespace fq {

enum class Decoder { Ml, Peel };
[[nodiscard]] const char* decoder_name(Decoder d) noexcept;
[[nodiscard]] std::optional<Decoder> decoder_from_name(std::string_view name) noexcept;

struct ExperimentConfig {
  std::uint32_t k = 300;
  std::vector<double> difficulties;               // target dbar values, mapped to Soliton D
  std::vector<std::uint32_t> truncation_degrees;  // explicit D values (alternative)
  std::vector<std::uint64_t> n_grid;              // absolute sample counts
  std::vector<double> normalized_grid;            // alternative: multiples of k log k / dbar
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 1;
  std::optional<double> erasure_prob;  // worker-skip probability p in [0, 1)
  Decoder decoder = Decoder::Ml;
  unsigned threads = 0;  // 0 = hardware concurrency
};

void validate(const ExperimentConfig& config);

struct ExperimentRecord {
  std::uint32_t k = 0;
  std::uint32_t max_degree = 0;  // Soliton truncation D
  double dbar = 0.0;             // achieved difficulty
  std::uint64_t n = 0;
  double normalized_n = 0.0;  // n * dbar / (k log k)
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double p_hat = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // 95% Wilson
  Decoder decoder = Decoder::Ml;
  std::uint64_t seed = 0;  // master seed of the sweep
  double elapsed_seconds = 0.0;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval; z defaults to the two-sided 95% quantile.
[[nodiscard]] Interval wilson_interval(std::uint64_t failures, std::uint64_t trials,
                                       double z = 1.959963984540054);

struct TrialDetail {
  bool success = false;
  DecodeKind verdict = DecodeKind::Ambiguous;
  bool isolated_input = false;  // some input symbol touched by no query
};

// One trial: draw a uniform input vector, collect n measurements, decode.
// Success means a unique solution equal to the truth; anything else counts as
// a failure. n == 0 is an automatic failure.
[[nodiscard]] TrialDetail run_trial_detailed(const DegreeDistribution& dist, std::uint64_t n,
                                             std::uint64_t seed, Decoder decoder = Decoder::Ml,
                                             std::optional<double> erasure_prob = {});
[[nodiscard]] bool run_trial(const DegreeDistribution& dist, std::uint64_t n, std::uint64_t seed,
                             Decoder decoder = Decoder::Ml,
                             std::optional<double> erasure_prob = {});

struct ErasureBatch {
  MeasurementBatch batch;
  std::uint64_t stream_length = 0;  // queries generated until stop_n were answered
};

// Streams queries through a worker-skip channel: each is answered independently
// with probability 1-p; returns the first stop_n answered measurements. With
// p == 0 this reproduces generate_batch draw-for-draw.
[[nodiscard]] ErasureBatch simulate_erasure_channel(const InputVector& x,
                                                    const DegreeDistribution& dist, double p,
                                                    std::uint64_t stop_n, Rng& g);

// Full sweep over (difficulty, n) pairs. Per-trial seeds are
// derive_seed(master_seed, {difficulty index, n, trial index}), so results are
// a pure function of the config regardless of thread count, and extending the
// grid never perturbs existing points.
[[nodiscard]] std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config);

// Normalized sample complexity at which p_hat crosses 0.5 from above (linear
// interpolation between bracketing grid points); records must belong to one
// difficulty. nullopt when the grid never crosses.
[[nodiscard]] std::optional<double> estimate_transition(std::span<const ExperimentRecord> records);

inline constexpr std::string_view csv_header =
    "k,D,dbar,n,normalized_n,trials,failures,p_hat,ci_low,ci_high,decoder,seed,elapsed_seconds";

void write_records_csv(std::span<const ExperimentRecord> records, std::ostream& out,
                       bool include_elapsed = true);
[[nodiscard]] std::vector<ExperimentRecord> read_records_csv(std::istream& in);

// JSON object whose keys mirror ExperimentConfig fields in lower_snake_case.
[[nodiscard]] ExperimentConfig config_from_json(std::istream& in);

}  // namespace fq
