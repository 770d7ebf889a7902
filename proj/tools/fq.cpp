// fq: fountain-coded query design, GF(2) recovery, analytic bounds and
// Monte Carlo sweeps from one binary.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fq/bounds.hpp"
#include "fq/codec.hpp"
#include "fq/degree.hpp"
#include "fq/experiment.hpp"
#include "fq/gf2.hpp"

namespace {

// Inclusive "start:stop:step" ranges; a bare value is a one-point range.
std::vector<double> parse_range_f(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ':')) parts.push_back(std::stod(field));
  if (parts.size() == 1) return {parts[0]};
  if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad range " + text);
  std::vector<double> values;
  const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) values.push_back(start + i * step);
  return values;
}

std::vector<std::uint64_t> parse_range_i(const std::string& text) {
  std::vector<std::uint64_t> values;
  for (double v : parse_range_f(text)) values.push_back(static_cast<std::uint64_t>(std::llround(v)));
  return values;
}

std::vector<double> parse_list_f(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
  return values;
}

std::vector<std::uint32_t> parse_list_i(const std::string& text) {
  std::vector<std::uint32_t> values;
  for (double v : parse_list_f(text)) values.push_back(static_cast<std::uint32_t>(v));
  return values;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FQ_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

fq::DegreeDistribution resolve_distribution(std::uint32_t k, std::optional<std::uint32_t> trunc,
                                            std::optional<double> difficulty,
                                            std::uint32_t* out_trunc = nullptr) {
  if (trunc.has_value() == difficulty.has_value())
    throw std::invalid_argument("give exactly one of --D / --difficulty");
  std::uint32_t d = trunc ? *trunc : fq::soliton_for_difficulty(k, *difficulty).params.max_degree;
  if (out_trunc) *out_trunc = d;
  return fq::ideal_soliton(fq::SolitonParams{k, d});
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  return file;
}

void print_records_pretty(const std::vector<fq::ExperimentRecord>& records, std::ostream& out) {
  out << "    k    D    dbar       n  norm_n   trials failures    p_hat   ci_low  ci_high dec\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%5u %4u %7.4f %7llu %7.4f %8llu %8llu %8.4f %8.4f %8.4f %s\n",
                  r.k, r.max_degree, r.dbar, static_cast<unsigned long long>(r.n), r.normalized_n,
                  static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.failures), r.p_hat, r.ci_low, r.ci_high,
                  fq::decoder_name(r.decoder));
    out << buf;
  }
}

std::string bits_to_string(const fq::BitVector& x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x.get(i) ? '1' : '0';
  return s;
}

int cmd_encode(std::uint32_t k, std::optional<std::uint32_t> trunc, std::optional<double> difficulty,
               std::uint64_t n, std::uint64_t seed, const std::string& x_bits,
               const std::string& out_path, const std::string& csv_path) {
  const auto dist = resolve_distribution(k, trunc, difficulty);
  fq::Rng g(seed);
  fq::InputVector x;
  if (x_bits.empty()) {
    x = fq::BitVector::random(k, g);
  } else {
    if (x_bits.size() != k) throw std::invalid_argument("--x must have exactly k bits");
    x = fq::InputVector(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      if (x_bits[i] != '0' && x_bits[i] != '1') throw std::invalid_argument("--x must be binary");
      x.set(i, x_bits[i] == '1');
    }
  }
  const auto batch = fq::generate_batch(x, dist, n, g);
  std::cerr << "input x: " << bits_to_string(x) << "\n";
  if (!out_path.empty()) fq::write_batch_file(batch, out_path);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    fq::write_batch_csv(batch, csv);
  }
  if (out_path.empty() && csv_path.empty()) fq::write_batch_csv(batch, std::cout);
  return 0;
}

int cmd_decode(const std::string& in_path, const std::string& decoder, bool pretty) {
  const auto batch = fq::read_batch_file(in_path);
  const auto dec = fq::decoder_from_name(decoder);
  if (!dec) throw std::invalid_argument("--decoder must be ml or peel");
  const auto result =
      *dec == fq::Decoder::Ml ? fq::ml_decode(batch) : fq::peel_decode(batch);

  const char* kind = result.kind == fq::DecodeKind::Unique       ? "unique"
                     : result.kind == fq::DecodeKind::Ambiguous  ? "ambiguous"
                                                                 : "inconsistent";
  if (pretty) {
    std::cout << "verdict:   " << kind << "\n"
              << "rank:      " << result.rank << "\n";
    if (result.kind == fq::DecodeKind::Ambiguous)
      std::cout << "free vars: " << result.free_vars << "\n";
    if (result.kind == fq::DecodeKind::Unique)
      std::cout << "solution:  " << bits_to_string(result.solution) << "\n";
  } else {
    std::cout << "kind,rank,free_vars,solution\n"
              << kind << ',' << result.rank << ','
              << (result.kind == fq::DecodeKind::Ambiguous ? std::to_string(result.free_vars) : "")
              << ','
              << (result.kind == fq::DecodeKind::Unique ? bits_to_string(result.solution) : "")
              << "\n";
  }
  return 0;
}

int cmd_bounds(std::uint32_t k, std::optional<std::uint32_t> trunc, std::optional<double> difficulty,
               const std::string& n_range, std::optional<double> c, std::optional<double> u,
               const std::string& out_path, bool pretty) {
  std::uint32_t used_trunc = 0;
  const auto dist = resolve_distribution(k, trunc, difficulty, &used_trunc);
  const double dbar = dist.mean_degree();
  std::cerr << "k=" << k << " D=" << used_trunc << " dbar=" << dbar << "\n";
  if (c)
    std::cerr << "sample-complexity threshold (c=" << *c
              << "): " << fq::sample_complexity_threshold(k, dbar, *c) << "\n";
  if (u)
    std::cerr << "smallest n with isolation probability <= k^-" << *u << ": "
              << fq::isolation_required_n(k, dbar, *u) << "\n";

  std::ofstream file;
  std::ostream& out = open_sink(out_path, file);
  if (pretty) {
    out << "      n  isolation_lower_bound  union_bound_pe  vacuous\n";
    char buf[128];
    for (const auto n : parse_range_i(n_range)) {
      const auto ub = fq::union_bound_error_prob(dist, n);
      std::snprintf(buf, sizeof buf, "%7llu  %21.6e  %14.6e  %s\n",
                    static_cast<unsigned long long>(n), fq::isolation_probability(dist, n),
                    ub.value, ub.vacuous ? "yes" : "no");
      out << buf;
    }
  } else {
    out << "n,isolation_lower_bound,union_bound_pe,vacuous\n";
    char buf[128];
    for (const auto n : parse_range_i(n_range)) {
      const auto ub = fq::union_bound_error_prob(dist, n);
      std::snprintf(buf, sizeof buf, "%llu,%.9e,%.9e,%d\n", static_cast<unsigned long long>(n),
                    fq::isolation_probability(dist, n), ub.value, ub.vacuous ? 1 : 0);
      out << buf;
    }
  }
  return 0;
}

int cmd_verify_lemmas(std::uint32_t max_k, const std::string& pairs_text) {
  bool all_pass = true;

  const auto overlap = fq::verify_overlap_bounds(max_k);
  std::cout << "overlap bounds (k <= " << max_k << "): " << overlap.triples << " triples, "
            << overlap.checks << " checks, " << overlap.failures.size() << " counterexamples -> "
            << (overlap.pass() ? "pass" : "FAIL") << "\n";
  for (const auto& f : overlap.failures)
    std::cout << "  counterexample k=" << f.k << " s=" << f.s << " d=" << f.d << ": " << f.what
              << "\n";
  all_pass = all_pass && overlap.pass();

  const auto chain = fq::verify_exponent_chain(max_k);
  std::cout << "exponent chain (k <= " << max_k << "): " << chain.cases << " cases -> "
            << (chain.pass() ? "pass" : "FAIL") << "\n";
  all_pass = all_pass && chain.pass();

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  if (pairs_text.empty()) {
    pairs = {{50, 10}, {100, 20}, {200, 31}};
  } else {
    std::stringstream ss(pairs_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("--pairs wants k:D[,k:D...]");
      pairs.emplace_back(std::stoul(item.substr(0, colon)), std::stoul(item.substr(colon + 1)));
    }
  }
  for (const auto& [k, trunc] : pairs) {
    const double dbar = fq::harmonic_number(trunc);
    const std::uint64_t n = std::max<std::uint64_t>(
        fq::bound_constants::linear_factor_mid * k,
        static_cast<std::uint64_t>(
            std::ceil(fq::bound_constants::isolation_log_factor * k * std::log(double(k)) / dbar)));
    const auto report = fq::verify_union_term_bounds(k, trunc, n);
    const bool ok = report.all_pass() && report.skipped() == 0 && report.stirling_pass;
    std::cout << "union terms k=" << k << " D=" << trunc << " n=" << n << ": "
              << report.checks.size() << " patterns, stirling "
              << (report.stirling_pass ? "ok" : "FAIL") << " -> " << (ok ? "pass" : "FAIL")
              << "\n";
    all_pass = all_pass && ok;
  }

  for (std::uint32_t trunc : {2u, 3u}) {
    const auto report = fq::verify_union_term_bounds(50, trunc, 68 * 50);
    const bool ok = !report.case2_occurs;
    std::cout << "mid regime absent for D=" << trunc << ": " << (ok ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && ok;
  }

  std::cout << (all_pass ? "all cases pass" : "COUNTEREXAMPLES FOUND") << "\n";
  return all_pass ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, std::uint32_t k, const std::string& difficulties,
              const std::string& truncations, const std::string& n_range,
              const std::string& normalized_range, std::uint64_t trials,
              std::optional<std::uint64_t> seed, unsigned threads, const std::string& decoder,
              std::optional<double> erasure, const std::string& out_path, bool pretty) {
  fq::ExperimentConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    config = fq::config_from_json(in);
  }
  if (k) config.k = k;
  if (!difficulties.empty()) {
    config.difficulties = parse_list_f(difficulties);
    config.truncation_degrees.clear();
  }
  if (!truncations.empty()) {
    config.truncation_degrees = parse_list_i(truncations);
    config.difficulties.clear();
  }
  if (!n_range.empty()) {
    config.n_grid = parse_range_i(n_range);
    config.normalized_grid.clear();
  }
  if (!normalized_range.empty()) {
    config.normalized_grid = parse_range_f(normalized_range);
    config.n_grid.clear();
  }
  if (trials) config.trials = trials;
  config.master_seed = seed ? *seed : (config_path.empty() ? default_seed() : config.master_seed);
  if (threads) config.threads = threads;
  if (!decoder.empty()) {
    const auto dec = fq::decoder_from_name(decoder);
    if (!dec) throw std::invalid_argument("--decoder must be ml or peel");
    config.decoder = *dec;
  }
  if (erasure) config.erasure_prob = *erasure;

  const auto records = fq::run_sweep(config);
  std::ofstream file;
  std::ostream& out = open_sink(out_path, file);
  if (pretty)
    print_records_pretty(records, out);
  else
    fq::write_records_csv(records, out);
  return 0;
}

int cmd_transition(const std::string& in_path, bool pretty) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open for reading: " + in_path);
  const auto records = fq::read_records_csv(in);

  // Group by truncation degree, preserving encounter order.
  std::vector<std::uint32_t> order;
  std::map<std::uint32_t, std::vector<fq::ExperimentRecord>> groups;
  for (const auto& r : records) {
    if (!groups.count(r.max_degree)) order.push_back(r.max_degree);
    groups[r.max_degree].push_back(r);
  }

  if (pretty) {
    for (const auto trunc : order) {
      const auto crossing = fq::estimate_transition(groups[trunc]);
      std::cout << "D=" << trunc << " dbar=" << groups[trunc].front().dbar << ": ";
      if (crossing)
        std::cout << "0.5 crossing at normalized n = " << *crossing << "\n";
      else
        std::cout << "out-of-range (never crosses 0.5 on the grid)\n";
    }
  } else {
    std::cout << "k,D,dbar,status,crossing_normalized_n\n";
    char buf[128];
    for (const auto trunc : order) {
      const auto& group = groups[trunc];
      const auto crossing = fq::estimate_transition(group);
      if (crossing)
        std::snprintf(buf, sizeof buf, "%u,%u,%.6f,ok,%.6f\n", group.front().k, trunc,
                      group.front().dbar, *crossing);
      else
        std::snprintf(buf, sizeof buf, "%u,%u,%.6f,out-of-range,\n", group.front().k, trunc,
                      group.front().dbar);
      std::cout << buf;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fountain-coded query design and GF(2) information recovery toolkit"};
  app.require_subcommand(1);

  // encode -----------------------------------------------------------------
  auto* encode = app.add_subcommand("encode", "generate a measurement batch from a Soliton law");
  std::uint32_t enc_k = 300;
  std::optional<std::uint32_t> enc_D;
  std::optional<double> enc_diff;
  std::uint64_t enc_n = 1;
  std::uint64_t enc_seed = default_seed();
  std::string enc_x, enc_out, enc_csv;
  encode->add_option("--k", enc_k, "input symbol count (>= 3)")->required();
  encode->add_option("--D", enc_D, "Soliton truncation degree");
  encode->add_option("--difficulty", enc_diff, "target query difficulty (mapped to nearest H_D)");
  encode->add_option("--n", enc_n, "number of measurements")->required();
  encode->add_option("--seed", enc_seed, "random seed (default: FQ_SEED or 1)");
  encode->add_option("--x", enc_x, "ground-truth bits (default: random)");
  encode->add_option("--out", enc_out, "write the binary batch container here");
  encode->add_option("--csv", enc_csv, "write the human-readable listing here");

  // decode -----------------------------------------------------------------
  auto* decode = app.add_subcommand("decode", "decode a batch container");
  std::string dec_in, dec_decoder = "ml";
  bool dec_pretty = false;
  decode->add_option("--in", dec_in, "batch container path")->required();
  decode->add_option("--decoder", dec_decoder, "ml | peel (default ml)");
  decode->add_flag("--pretty", dec_pretty, "aligned text instead of CSV");

  // bounds -----------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "tabulate analytic error bounds over an n grid");
  std::uint32_t bnd_k = 300;
  std::optional<std::uint32_t> bnd_D;
  std::optional<double> bnd_diff;
  std::string bnd_n, bnd_out;
  std::optional<double> bnd_c, bnd_u;
  bool bnd_pretty = false;
  bounds->add_option("--k", bnd_k, "input symbol count")->required();
  bounds->add_option("--D", bnd_D, "Soliton truncation degree");
  bounds->add_option("--difficulty", bnd_diff, "target query difficulty");
  bounds->add_option("--n", bnd_n, "sample counts, start:stop:step inclusive")->required();
  bounds->add_option("--c", bnd_c, "also print the threshold ceil(c*max{k, k log k / dbar})");
  bounds->add_option("--u", bnd_u, "also print the smallest n with isolation prob <= k^-u");
  bounds->add_option("--out", bnd_out, "write CSV here instead of stdout");
  bounds->add_flag("--pretty", bnd_pretty, "aligned text instead of CSV");

  // verify-lemmas ------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify-lemmas", "exhaustively verify the combinatorial bounds behind the union bound");
  std::uint32_t ver_max_k = 20;
  std::string ver_pairs;
  verify->add_option("--max-k", ver_max_k, "sweep all k up to this bound (default 20)");
  verify->add_option("--pairs", ver_pairs, "union-term cases as k:D[,k:D...] (default 50:10,100:20,200:31)");

  // sweep --------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo failure-rate sweep; emits CSV");
  std::string swp_config, swp_diff, swp_D, swp_n, swp_norm, swp_decoder, swp_out;
  std::uint32_t swp_k = 0;
  std::uint64_t swp_trials = 0;
  std::optional<std::uint64_t> swp_seed;
  unsigned swp_threads = 0;
  std::optional<double> swp_erasure;
  bool swp_pretty = false;
  sweep->add_option("--config", swp_config, "JSON config; flags override its fields");
  sweep->add_option("--k", swp_k, "input symbol count");
  sweep->add_option("--difficulty", swp_diff, "target difficulties, comma separated");
  sweep->add_option("--D", swp_D, "explicit truncation degrees, comma separated");
  sweep->add_option("--n", swp_n, "absolute sample counts, start:stop:step");
  sweep->add_option("--normalized", swp_norm, "normalized sample counts, start:stop:step");
  sweep->add_option("--trials", swp_trials, "trials per grid point");
  sweep->add_option("--seed", swp_seed, "master seed (default: FQ_SEED or 1)");
  sweep->add_option("--threads", swp_threads, "worker threads (default: all cores)");
  sweep->add_option("--decoder", swp_decoder, "ml | peel");
  sweep->add_option("--erasure-prob", swp_erasure, "worker skip probability in [0,1)");
  sweep->add_option("--out", swp_out, "write CSV here instead of stdout");
  sweep->add_flag("--pretty", swp_pretty, "aligned text instead of CSV");

  // transition ---------------------------------------------------------------
  auto* transition = app.add_subcommand("transition", "locate the 0.5 crossing in a sweep CSV");
  std::string trn_in;
  bool trn_pretty = false;
  transition->add_option("--in", trn_in, "sweep CSV path")->required();
  transition->add_flag("--pretty", trn_pretty, "text output instead of CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(encode))
      return cmd_encode(enc_k, enc_D, enc_diff, enc_n, enc_seed, enc_x, enc_out, enc_csv);
    if (app.got_subcommand(decode)) return cmd_decode(dec_in, dec_decoder, dec_pretty);
    if (app.got_subcommand(bounds))
      return cmd_bounds(bnd_k, bnd_D, bnd_diff, bnd_n, bnd_c, bnd_u, bnd_out, bnd_pretty);
    if (app.got_subcommand(verify)) return cmd_verify_lemmas(ver_max_k, ver_pairs);
    if (app.got_subcommand(sweep))
      return cmd_sweep(swp_config, swp_k, swp_diff, swp_D, swp_n, swp_norm, swp_trials, swp_seed,
                       swp_threads, swp_decoder, swp_erasure, swp_out, swp_pretty);
    if (app.got_subcommand(transition)) return cmd_transition(trn_in, trn_pretty);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
