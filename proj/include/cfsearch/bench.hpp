#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfsearch/baselines.hpp"
#include "cfsearch/cf_model.hpp"
#include "cfsearch/optimal_search.hpp"
#include "cfsearch/ring.hpp"

namespace cfsearch::bench {

enum class Algorithm { Optimal, MimoOptimal, Exhaustive, Clll, Qes };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct BenchConfig {
  std::size_t users = 2;     // L
  std::size_t antennas = 1;  // k
  std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  Ring ring = Ring::Gaussian;
  std::vector<Algorithm> algorithms{Algorithm::Optimal};
  QesParams qes{};
  CLLLParams clll{};
  ExhaustiveMode exhaustive_mode = ExhaustiveMode::NormBall;
  // Empty selects default_reduction(ring).
  std::optional<SectorReduction> reduction;
  std::string output_path;

  // Throws InvalidInput on inconsistent settings.
  void validate() const;
};

struct BenchRecord {
  double snr_db = 0.0;
  std::size_t users = 0;
  std::size_t antennas = 0;
  Ring ring = Ring::Gaussian;
  Algorithm algorithm = Algorithm::Optimal;
  double avg_rate = 0.0;  // bits per user
  double avg_f = 0.0;
  double cpu_ms_total = 0.0;
  std::optional<double> optimal_match_fraction;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

// k x L matrix of i.i.d. CN(0, 1) entries. Depends only on (seed, index).
ComplexMatrix gen_channel(std::size_t users, std::size_t antennas, std::uint64_t seed,
                          std::uint64_t index);

// P = 10^(snr_db / 10)
double snr_to_power(double snr_db);

struct TrialOutcome {
  CoefficientVector a;
  double f = 0.0;     // under the sweep's common objective
  double rate = 0.0;  // bits per user
  double cpu_ms = 0.0;
};

// Runs one algorithm on one channel. Results are scored with cost_matrix for
// k = 1 and mimo_gram for k > 1, so every algorithm in a sweep shares one
// objective.
TrialOutcome run_trial(Algorithm algorithm, const ChannelMatrix& ch, const BenchConfig& cfg);

// Records ordered by SNR, then by the configured algorithm order.
std::vector<BenchRecord> run_sweep(const BenchConfig& cfg);

// Worker threads for run_sweep: CFSEARCH_WORKERS if set, else hardware
// concurrency, at least 1.
std::size_t worker_count();

inline constexpr std::string_view kCsvHeader =
    "snr_db,L,k,ring,algorithm,avg_rate,avg_f,cpu_ms_total,optimal_match_fraction,trials,seed";

void write_csv(std::ostream& out, std::span<const BenchRecord> records);
// Writes the CSV plus a `<path>.meta.json` sidecar describing the run.
void write_csv_file(const std::string& path, const BenchConfig& cfg,
                    std::span<const BenchRecord> records);

// Flat `key = value` text; arrays as JSON literals; '#' starts a comment.
BenchConfig parse_config(std::string_view text);
BenchConfig load_config(const std::string& path);

}  // namespace cfsearch::bench
