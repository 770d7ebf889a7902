#include "fq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace fq {

const char* decoder_name(Decoder d) noexcept { return d == Decoder::Ml ? "ml" : "peel"; }

std::optional<Decoder> decoder_from_name(std::string_view name) noexcept {
  if (name == "ml") return Decoder::Ml;
  if (name == "peel") return Decoder::Peel;
  return std::nullopt;
}

void validate(const ExperimentConfig& config) {
  if (config.k < 3) throw std::invalid_argument("config: k must be >= 3");
  if (config.difficulties.empty() == config.truncation_degrees.empty())
    throw std::invalid_argument(
        "config: exactly one of difficulties / truncation_degrees must be set");
  if (config.n_grid.empty() == config.normalized_grid.empty())
    throw std::invalid_argument("config: exactly one of n_grid / normalized_grid must be set");
  for (auto n : config.n_grid)
    if (n < 1) throw std::invalid_argument("config: n_grid values must be >= 1");
  for (auto v : config.normalized_grid)
    if (!(v > 0.0)) throw std::invalid_argument("config: normalized_grid values must be > 0");
  for (auto d : config.truncation_degrees)
    if (d < 2 || d > config.k)
      throw std::invalid_argument("config: truncation degrees must lie in {2, ..., k}");
  if (config.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (config.erasure_prob && !(*config.erasure_prob >= 0.0 && *config.erasure_prob < 1.0))
    throw std::invalid_argument("config: erasure_prob must lie in [0, 1)");
}

Interval wilson_interval(std::uint64_t failures, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = p + z2 / (2.0 * t);
  const double radius = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t));
  Interval ci{std::max(0.0, (center - radius) / denom), std::min(1.0, (center + radius) / denom)};
  // At the extremes center == radius analytically; pin the rounding noise.
  if (failures == 0) ci.low = 0.0;
  if (failures == trials) ci.high = 1.0;
  return ci;
}

ErasureBatch simulate_erasure_channel(const InputVector& x, const DegreeDistribution& dist,
                                      double p, std::uint64_t stop_n, Rng& g) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("simulate_erasure_channel: p must lie in [0, 1)");
  if (stop_n < 1) throw std::invalid_argument("simulate_erasure_channel: stop_n must be >= 1");
  if (x.size() != dist.k())
    throw std::invalid_argument("simulate_erasure_channel: dimension mismatch");

  ErasureBatch result{MeasurementBatch{BitMatrix(stop_n, dist.k()), BitVector(stop_n)}, 0};
  QueryStream stream(dist);
  std::uint64_t received = 0;
  while (received < stop_n) {
    const auto picked = stream.next(g);
    ++result.stream_length;
    if (p > 0.0 && uniform_unit(g) < p) continue;  // worker skipped this query
    bool answer = false;
    for (auto idx : picked) {
      result.batch.matrix.set(received, idx, true);
      answer ^= x.get(idx);
    }
    result.batch.answers.set(received, answer);
    ++received;
  }
  return result;
}

TrialDetail run_trial_detailed(const DegreeDistribution& dist, std::uint64_t n, std::uint64_t seed,
                               Decoder decoder, std::optional<double> erasure_prob) {
  const std::uint32_t k = dist.k();
  if (n == 0) return TrialDetail{false, DecodeKind::Ambiguous, k > 0};

  Rng g(seed);
  const InputVector x = BitVector::random(k, g);
  MeasurementBatch batch = (erasure_prob && *erasure_prob > 0.0)
                               ? simulate_erasure_channel(x, dist, *erasure_prob, n, g).batch
                               : generate_batch(x, dist, n, g);
  const DecodeResult result = decoder == Decoder::Ml ? ml_decode(batch) : peel_decode(batch);
  TrialDetail detail;
  detail.verdict = result.kind;
  detail.success = result.kind == DecodeKind::Unique && result.solution == x;
  detail.isolated_input = has_isolated_column(batch.matrix);
  return detail;
}

bool run_trial(const DegreeDistribution& dist, std::uint64_t n, std::uint64_t seed,
               Decoder decoder, std::optional<double> erasure_prob) {
  return run_trial_detailed(dist, n, seed, decoder, erasure_prob).success;
}

namespace {

struct ResolvedDifficulty {
  std::uint32_t max_degree;
  double dbar;
  DegreeDistribution dist;
};

std::vector<ResolvedDifficulty> resolve_difficulties(const ExperimentConfig& config) {
  std::vector<ResolvedDifficulty> out;
  if (!config.truncation_degrees.empty()) {
    for (auto trunc : config.truncation_degrees) {
      auto dist = ideal_soliton(SolitonParams{config.k, trunc});
      const double dbar = dist.mean_degree();
      out.push_back(ResolvedDifficulty{trunc, dbar, std::move(dist)});
    }
  } else {
    for (double target : config.difficulties) {
      const SolitonFit fit = soliton_for_difficulty(config.k, target);
      auto dist = ideal_soliton(fit.params);
      out.push_back(
          ResolvedDifficulty{fit.params.max_degree, fit.achieved_difficulty, std::move(dist)});
    }
  }
  return out;
}

std::uint64_t count_failures(const ResolvedDifficulty& diff, std::uint64_t n,
                             const ExperimentConfig& config, std::uint64_t diff_index,
                             unsigned threads) {
  const auto trial_failed = [&](std::uint64_t t) -> std::uint64_t {
    const std::uint64_t seed = derive_seed(config.master_seed, {diff_index, n, t});
    return run_trial(diff.dist, n, seed, config.decoder, config.erasure_prob) ? 0 : 1;
  };

  if (threads <= 1 || config.trials < 2 * threads) {
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < config.trials; ++t) failures += trial_failed(t);
    return failures;
  }

  std::vector<std::uint64_t> partial(threads, 0);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::uint64_t chunk = (config.trials + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(config.trials, begin + chunk);
      std::uint64_t local = 0;
      for (std::uint64_t t = begin; t < end; ++t) local += trial_failed(t);
      partial[w] = local;
    });
  }
  for (auto& th : pool) th.join();
  std::uint64_t failures = 0;
  for (auto f : partial) failures += f;
  return failures;
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config) {
  validate(config);
  const auto difficulties = resolve_difficulties(config);
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;

  const double k_log_k = config.k * std::log(static_cast<double>(config.k));
  std::vector<ExperimentRecord> records;
  for (std::uint64_t di = 0; di < difficulties.size(); ++di) {
    const auto& diff = difficulties[di];
    std::vector<std::uint64_t> ns = config.n_grid;
    if (ns.empty())
      for (double v : config.normalized_grid)
        ns.push_back(std::max<std::uint64_t>(1, std::llround(v * k_log_k / diff.dbar)));

    for (std::uint64_t n : ns) {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t failures = count_failures(diff, n, config, di, threads);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      ExperimentRecord rec;
      rec.k = config.k;
      rec.max_degree = diff.max_degree;
      rec.dbar = diff.dbar;
      rec.n = n;
      rec.normalized_n = static_cast<double>(n) * diff.dbar / k_log_k;
      rec.trials = config.trials;
      rec.failures = failures;
      rec.p_hat = static_cast<double>(failures) / static_cast<double>(config.trials);
      const Interval ci = wilson_interval(failures, config.trials);
      rec.ci_low = ci.low;
      rec.ci_high = ci.high;
      rec.decoder = config.decoder;
      rec.seed = config.master_seed;
      rec.elapsed_seconds = elapsed.count();
      records.push_back(rec);
    }
  }
  return records;
}

std::optional<double> estimate_transition(std::span<const ExperimentRecord> records) {
  if (records.size() < 2) return std::nullopt;
  for (const auto& r : records)
    if (r.max_degree != records.front().max_degree || r.k != records.front().k)
      throw std::invalid_argument("estimate_transition: records span several difficulties");

  std::vector<ExperimentRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.n < b.n; });

  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double p0 = sorted[i].p_hat, p1 = sorted[i + 1].p_hat;
    if (p0 >= 0.5 && p1 < 0.5) {
      const double x0 = sorted[i].normalized_n, x1 = sorted[i + 1].normalized_n;
      return x0 + (p0 - 0.5) * (x1 - x0) / (p0 - p1);
    }
  }
  return std::nullopt;
}

void write_records_csv(std::span<const ExperimentRecord> records, std::ostream& out,
                       bool include_elapsed) {
  std::string_view header = csv_header;
  if (!include_elapsed) header = header.substr(0, header.rfind(",elapsed_seconds"));
  out << header << '\n';
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%u,%u,%.6f,%llu,%.6f,%llu,%llu,%.6f,%.6f,%.6f,%s,%llu", r.k,
                  r.max_degree, r.dbar, static_cast<unsigned long long>(r.n), r.normalized_n,
                  static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.failures), r.p_hat, r.ci_low, r.ci_high,
                  decoder_name(r.decoder), static_cast<unsigned long long>(r.seed));
    out << buf;
    if (include_elapsed) {
      std::snprintf(buf, sizeof buf, ",%.3f", r.elapsed_seconds);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("records csv: empty input");
  if (line.rfind("k,D,dbar,n,", 0) != 0) throw std::runtime_error("records csv: bad header");

  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 12) throw std::runtime_error("records csv: short row");
    ExperimentRecord r;
    r.k = static_cast<std::uint32_t>(std::stoul(fields[0]));
    r.max_degree = static_cast<std::uint32_t>(std::stoul(fields[1]));
    r.dbar = std::stod(fields[2]);
    r.n = std::stoull(fields[3]);
    r.normalized_n = std::stod(fields[4]);
    r.trials = std::stoull(fields[5]);
    r.failures = std::stoull(fields[6]);
    r.p_hat = std::stod(fields[7]);
    r.ci_low = std::stod(fields[8]);
    r.ci_high = std::stod(fields[9]);
    const auto dec = decoder_from_name(fields[10]);
    if (!dec) throw std::runtime_error("records csv: unknown decoder " + fields[10]);
    r.decoder = *dec;
    r.seed = std::stoull(fields[11]);
    if (fields.size() > 12) r.elapsed_seconds = std::stod(fields[12]);
    records.push_back(r);
  }
  return records;
}

ExperimentConfig config_from_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config json: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config json: top level must be an object");

  static const char* known[] = {"k",      "difficulties", "truncation_degrees",
                                "n_grid", "normalized_grid", "trials", "master_seed",
                                "erasure_prob", "decoder", "threads"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) throw std::invalid_argument("config json: unknown key '" + key + "'");
  }

  ExperimentConfig config;
  if (j.contains("k")) config.k = j.at("k").get<std::uint32_t>();
  if (j.contains("difficulties")) config.difficulties = j.at("difficulties").get<std::vector<double>>();
  if (j.contains("truncation_degrees"))
    config.truncation_degrees = j.at("truncation_degrees").get<std::vector<std::uint32_t>>();
  if (j.contains("n_grid")) config.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
  if (j.contains("normalized_grid"))
    config.normalized_grid = j.at("normalized_grid").get<std::vector<double>>();
  if (j.contains("trials")) config.trials = j.at("trials").get<std::uint64_t>();
  if (j.contains("master_seed")) config.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("erasure_prob")) config.erasure_prob = j.at("erasure_prob").get<double>();
  if (j.contains("threads")) config.threads = j.at("threads").get<unsigned>();
  if (j.contains("decoder")) {
    const auto dec = decoder_from_name(j.at("decoder").get<std::string>());
    if (!dec) throw std::invalid_argument("config json: decoder must be 'ml' or 'peel'");
    config.decoder = *dec;
  }
  return config;
}

}  // namespace fq
