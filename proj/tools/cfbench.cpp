// cfbench: single-channel search, SNR sweeps, algorithm comparison, selftest.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cfsearch/baselines.hpp"
#include "cfsearch/bench.hpp"
#include "cfsearch/channel_io.hpp"
#include "cfsearch/errors.hpp"
#include "cfsearch/mimo_search.hpp"
#include "cfsearch/optimal_search.hpp"

namespace {

using namespace cfsearch;
using bench::Algorithm;

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2, kIo = 3 };

struct SearchArgs {
  std::string ring = "gaussian";
  std::optional<double> power;
  std::optional<double> snr_db;
  std::string h;
  std::string channel_file;
  std::string algorithm;
  std::string exhaustive_mode = "pruned";
  std::string reduction = "default";
  QesParams qes;
  CLLLParams clll;
};

struct CompareArgs {
  std::size_t users = 4;
  std::size_t antennas = 1;
  std::vector<double> snr_db{0, 5, 10, 15, 20};
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::string ring = "gaussian";
  std::vector<std::string> algorithms;
  std::string exhaustive_mode = "pruned";
  QesParams qes;
  CLLLParams clll;
};

ExhaustiveMode parse_mode(const std::string& s) {
  if (s == "ball") return ExhaustiveMode::NormBall;
  if (s == "pruned") return ExhaustiveMode::CostPruned;
  throw InvalidInput("exhaustive mode must be 'ball' or 'pruned'");
}

std::optional<SectorReduction> parse_reduction_arg(const std::string& s) {
  if (s == "default") return std::nullopt;
  if (s == "none") return SectorReduction::None;
  if (s == "quadrant") return SectorReduction::Quadrant;
  if (s == "sextant") return SectorReduction::Sextant;
  throw InvalidInput("reduction must be default, none, quadrant or sextant");
}

int run_search(const SearchArgs& args) {
  const Ring ring = parse_ring(args.ring);
  if (args.power.has_value() == args.snr_db.has_value()) {
    throw InvalidInput("give exactly one of --P and --snr-db");
  }
  if (args.h.empty() == args.channel_file.empty()) {
    throw InvalidInput("give exactly one of --h and --channel-file");
  }
  const double power = args.power ? *args.power : bench::snr_to_power(*args.snr_db);
  const ComplexMatrix h =
      args.h.empty() ? read_channel_file(args.channel_file) : parse_channel(args.h);
  const ChannelMatrix ch(h, power);
  const bool single = ch.antennas() == 1;

  const Algorithm algorithm = args.algorithm.empty()
                                  ? (single ? Algorithm::Optimal : Algorithm::MimoOptimal)
                                  : bench::parse_algorithm(args.algorithm);
  const auto reduction = parse_reduction_arg(args.reduction);

  SearchResult result;
  const double rate_scale = single ? 1.0 : 0.5;
  switch (algorithm) {
    case Algorithm::Optimal:
      if (!single) throw InvalidInput("optimal needs a single-row channel; use mimo-optimal");
      result = search_optimal(ch.row_channel(), ring, reduction.value_or(default_reduction(ring)));
      break;
    case Algorithm::MimoOptimal:
      result = search_optimal_mimo(ch, ring);
      break;
    case Algorithm::Exhaustive:
      result = single ? exhaustive_search(cost_matrix(ch.row_channel()), phi_bound(ch.row_channel()),
                                          ring, parse_mode(args.exhaustive_mode))
                      : exhaustive_search(mimo_gram(ch), mimo_phi(ch), ring,
                                          parse_mode(args.exhaustive_mode));
      break;
    case Algorithm::Clll:
      if (ring != Ring::Gaussian) throw InvalidInput("clll is only available over Z[j]");
      result = clll_search(single ? cost_matrix(ch.row_channel()) : mimo_gram(ch), args.clll);
      break;
    case Algorithm::Qes:
      if (ring != Ring::Gaussian) throw InvalidInput("qes is only available over Z[j]");
      if (!single) throw InvalidInput("qes needs a single-row channel");
      result = qes_search(ch.row_channel(), args.qes);
      break;
  }
  // MIMO-optimal on one row still scores against the normalized Gram.
  if (single && algorithm != Algorithm::MimoOptimal) {
    result.rate = rate_from_cost(ch.row_channel(), result.f_min);
  } else {
    result.rate = rate_scale * log2_plus(1.0 / result.f_min);
  }

  nlohmann::json out = result_to_json(result);
  out["algorithm"] = std::string(bench::to_string(algorithm));
  out["L"] = ch.users();
  out["k"] = ch.antennas();
  out["P"] = power;
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int run_sweep_cmd(const std::string& config_path, const std::string& output) {
  bench::BenchConfig cfg = bench::load_config(config_path);
  if (!output.empty()) cfg.output_path = output;
  const auto records = bench::run_sweep(cfg);
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    bench::write_csv(std::cout, records);
  } else {
    bench::write_csv_file(cfg.output_path, cfg, records);
    std::cerr << "wrote " << records.size() << " records to " << cfg.output_path << '\n';
  }
  return kOk;
}

std::vector<Algorithm> default_algorithms(const bench::BenchConfig& cfg) {
  std::vector<Algorithm> out;
  if (cfg.antennas == 1) {
    out.push_back(Algorithm::Optimal);
  } else {
    out.push_back(Algorithm::MimoOptimal);
  }
  out.push_back(Algorithm::Exhaustive);
  if (cfg.ring == Ring::Gaussian) {
    out.push_back(Algorithm::Clll);
    if (cfg.antennas == 1) out.push_back(Algorithm::Qes);
  }
  return out;
}

int run_compare(const CompareArgs& args) {
  bench::BenchConfig cfg;
  cfg.users = args.users;
  cfg.antennas = args.antennas;
  cfg.snr_db = args.snr_db;
  cfg.trials = args.trials;
  cfg.seed = args.seed;
  cfg.ring = parse_ring(args.ring);
  cfg.qes = args.qes;
  cfg.clll = args.clll;
  cfg.exhaustive_mode = parse_mode(args.exhaustive_mode);
  cfg.algorithms.clear();
  for (const auto& a : args.algorithms) cfg.algorithms.push_back(bench::parse_algorithm(a));
  if (cfg.algorithms.empty()) cfg.algorithms = default_algorithms(cfg);

  const auto records = bench::run_sweep(cfg);
  std::printf("L=%zu k=%zu ring=%s trials=%zu seed=%llu\n", cfg.users, cfg.antennas,
              std::string(to_string(cfg.ring)).c_str(), cfg.trials,
              static_cast<unsigned long long>(cfg.seed));
  std::printf("%8s  %-13s %10s %12s %12s %8s\n", "snr_db", "algorithm", "avg_rate", "avg_f",
              "cpu_ms", "match");
  for (const auto& r : records) {
    char match[16] = "-";
    if (r.optimal_match_fraction) std::snprintf(match, sizeof match, "%.3f", *r.optimal_match_fraction);
    std::printf("%8.2f  %-13s %10.5f %12.6g %12.3f %8s\n", r.snr_db,
                std::string(bench::to_string(r.algorithm)).c_str(), r.avg_rate, r.avg_f,
                r.cpu_ms_total, match);
  }
  return kOk;
}

// Reduced oracle-equivalence run: exact searches against the pruned
// exhaustive search, plus CLLL dominance.
int run_selftest(std::size_t trials, std::uint64_t seed) {
  std::size_t checks = 0;
  std::size_t failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      std::cerr << "FAIL " << what << '\n';
    }
  };
  auto same = [](double x, double ref) { return std::abs(x - ref) <= 1e-9 * ref; };

  std::uint64_t draw = 0;
  for (const Ring ring : {Ring::Gaussian, Ring::Eisenstein}) {
    for (const std::size_t users : {2u, 3u}) {
      for (const double snr : {0.0, 10.0, 20.0}) {
        for (std::size_t t = 0; t < trials; ++t) {
          const ChannelMatrix ch(bench::gen_channel(users, 1, seed, draw++),
                                 bench::snr_to_power(snr));
          const ChannelVector row = ch.row_channel();
          const CostMatrix m = cost_matrix(row);
          const double f_ref =
              exhaustive_search(m, phi_bound(row), ring, ExhaustiveMode::CostPruned).f_min;
          const std::string tag = std::string(to_string(ring)) + " L=" + std::to_string(users) +
                                  " snr=" + std::to_string(snr) + " trial=" + std::to_string(t);
          check(same(search_optimal(row, ring).f_min, f_ref), "optimal " + tag);
          check(same(cost(search_optimal_mimo(ch, ring).a_opt, m), f_ref), "mimo k=1 " + tag);
          if (ring == Ring::Gaussian) check(clll_search(m).f_min >= f_ref * (1 - 1e-9), "clll " + tag);
        }
      }
      for (const double snr : {0.0, 10.0}) {
        for (std::size_t t = 0; t < trials / 2 + 1; ++t) {
          const ChannelMatrix ch(bench::gen_channel(users, 2, seed, draw++),
                                 bench::snr_to_power(snr));
          const double f_ref =
              exhaustive_search(mimo_gram(ch), mimo_phi(ch), ring, ExhaustiveMode::CostPruned).f_min;
          check(same(search_optimal_mimo(ch, ring).f_min, f_ref),
                std::string("mimo k=2 ") + std::string(to_string(ring)) + " L=" +
                    std::to_string(users) + " trial=" + std::to_string(t));
        }
      }
    }
  }
  std::printf("selftest: %zu checks, %zu failures\n", checks, failures);
  return failures == 0 ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal compute-and-forward coefficient search and benchmarks"};
  app.require_subcommand(1);

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Find the coefficient vector for one channel");
  search->set_help_flag("--help", "Print this help message and exit");  // frees --h
  search->add_option("--ring", search_args.ring, "gaussian or eisenstein")->capture_default_str();
  auto* p_opt = search->add_option("--P", search_args.power, "Linear transmit power");
  auto* snr_opt = search->add_option("--snr-db", search_args.snr_db, "Power in dB");
  p_opt->excludes(snr_opt);
  auto* h_opt = search->add_option("--h", search_args.h, "Channel JSON: [[re,im],...] or rows");
  auto* file_opt = search->add_option("--channel-file", search_args.channel_file, "Channel JSON file");
  h_opt->excludes(file_opt);
  search->add_option("--algorithm", search_args.algorithm,
                     "optimal, mimo-optimal, exhaustive, clll or qes");
  search->add_option("--exhaustive-mode", search_args.exhaustive_mode, "ball or pruned")
      ->capture_default_str();
  search->add_option("--reduction", search_args.reduction, "default, none, quadrant or sextant")
      ->capture_default_str();
  search->add_option("--qes-mag-step", search_args.qes.mag_step)->capture_default_str();
  search->add_option("--qes-phase-step", search_args.qes.phase_step_deg, "Degrees")
      ->capture_default_str();
  search->add_option("--qes-mag-max", search_args.qes.mag_max, "0 selects the default");
  search->add_option("--clll-delta", search_args.clll.delta)->capture_default_str();

  std::string config_path;
  std::string output_path;
  auto* sweep = app.add_subcommand("sweep", "Run an SNR sweep from a config file, write CSV");
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--output", output_path, "CSV path (overrides the config; '-' for stdout)");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Rate/runtime table over shared channels");
  compare->add_option("--L", cmp.users)->capture_default_str();
  compare->add_option("--k", cmp.antennas)->capture_default_str();
  compare->add_option("--snr-db", cmp.snr_db)->capture_default_str();
  compare->add_option("--trials", cmp.trials)->capture_default_str();
  compare->add_option("--seed", cmp.seed)->capture_default_str();
  compare->add_option("--ring", cmp.ring)->capture_default_str();
  compare->add_option("--algorithms", cmp.algorithms, "Default: every applicable algorithm");
  compare->add_option("--exhaustive-mode", cmp.exhaustive_mode, "ball or pruned")
      ->capture_default_str();
  compare->add_option("--qes-mag-step", cmp.qes.mag_step)->capture_default_str();
  compare->add_option("--qes-phase-step", cmp.qes.phase_step_deg)->capture_default_str();
  compare->add_option("--clll-delta", cmp.clll.delta)->capture_default_str();

  std::size_t selftest_trials = 40;
  std::uint64_t selftest_seed = 7;
  auto* selftest = app.add_subcommand("selftest", "Oracle-equivalence checks at reduced scale");
  selftest->add_option("--trials", selftest_trials)->capture_default_str();
  selftest->add_option("--seed", selftest_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*search) return run_search(search_args);
    if (*sweep) return run_sweep_cmd(config_path, output_path);
    if (*compare) return run_compare(cmp);
    if (*selftest) return run_selftest(selftest_trials, selftest_seed);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
