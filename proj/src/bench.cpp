#include "cfsearch/bench.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cfsearch/errors.hpp"
#include "cfsearch/mimo_search.hpp"

namespace cfsearch::bench {

namespace {

constexpr double kMatchTolerance = 1e-9;

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

struct Objective {
  CostMatrix m;
  double phi;
  double rate_gain;   // rate = rate_scale * log2+(rate_gain / f)
  double rate_scale;  // 1 for a single antenna, 1/2 for integer forcing
};

Objective make_objective(const ChannelMatrix& ch) {
  if (ch.antennas() == 1) {
    const ChannelVector row = ch.row_channel();
    return {cost_matrix(row), phi_bound(row), 1.0 + row.power() * row.norm_sq(), 1.0};
  }
  return {mimo_gram(ch), mimo_phi(ch), 1.0, 0.5};
}

TrialOutcome score(const Objective& obj, CoefficientVector a, double cpu_ms) {
  TrialOutcome out;
  out.f = cost(a, obj.m);
  out.rate = obj.rate_scale * log2_plus(obj.rate_gain / out.f);
  out.a = std::move(a);
  out.cpu_ms = cpu_ms;
  return out;
}

TrialOutcome run_scored(Algorithm algorithm, const ChannelMatrix& ch, const Objective& obj,
                        const BenchConfig& cfg) {
  const SectorReduction reduction = cfg.reduction.value_or(default_reduction(cfg.ring));
  const double t0 = thread_cpu_ms();
  CoefficientVector a;
  switch (algorithm) {
    case Algorithm::Optimal:
      a = search_optimal(ch.row_channel(), cfg.ring, reduction).a_opt;
      break;
    case Algorithm::MimoOptimal:
      a = search_optimal_mimo(ch, cfg.ring).a_opt;
      break;
    case Algorithm::Exhaustive:
      a = exhaustive_search(obj.m, obj.phi, cfg.ring, cfg.exhaustive_mode).a_opt;
      break;
    case Algorithm::Clll:
      a = clll_search(obj.m, cfg.clll).a_opt;
      break;
    case Algorithm::Qes:
      a = qes_search(ch.row_channel(), cfg.qes).a_opt;
      break;
  }
  const double t1 = thread_cpu_ms();
  return score(obj, std::move(a), t1 - t0);
}

// Reference for optimal_match_fraction: exhaustive when selected, else an
// exact search.
std::optional<std::size_t> reference_index(const std::vector<Algorithm>& algorithms) {
  for (const Algorithm preferred :
       {Algorithm::Exhaustive, Algorithm::Optimal, Algorithm::MimoOptimal}) {
    const auto it = std::find(algorithms.begin(), algorithms.end(), preferred);
    if (it != algorithms.end()) return static_cast<std::size_t>(it - algorithms.begin());
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

nlohmann::json parse_value(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) return text;  // bare word
  return j;
}

template <typename T>
T as_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw InvalidInput("config key '" + key + "' expects a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
      throw InvalidInput("config key '" + key + "' expects a non-negative integer");
    }
  }
  return v.get<T>();
}

std::string as_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw InvalidInput("config key '" + key + "' expects a string");
  return v.get<std::string>();
}

SectorReduction parse_reduction(const std::string& name) {
  if (name == "none") return SectorReduction::None;
  if (name == "quadrant") return SectorReduction::Quadrant;
  if (name == "sextant") return SectorReduction::Sextant;
  throw InvalidInput("unknown reduction '" + name + "'");
}

std::string_view reduction_name(SectorReduction r) {
  switch (r) {
    case SectorReduction::None:
      return "none";
    case SectorReduction::Quadrant:
      return "quadrant";
    case SectorReduction::Sextant:
      return "sextant";
  }
  return "none";
}

nlohmann::json config_to_json(const BenchConfig& cfg) {
  nlohmann::json algs = nlohmann::json::array();
  for (const auto a : cfg.algorithms) algs.push_back(std::string(to_string(a)));
  return {
      {"L", cfg.users},
      {"k", cfg.antennas},
      {"snr_db", cfg.snr_db},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"ring", std::string(to_string(cfg.ring))},
      {"algorithms", algs},
      {"qes_mag_step", cfg.qes.mag_step},
      {"qes_phase_step_deg", cfg.qes.phase_step_deg},
      {"qes_mag_max", cfg.qes.mag_max},
      {"clll_delta", cfg.clll.delta},
      {"exhaustive_mode",
       cfg.exhaustive_mode == ExhaustiveMode::NormBall ? "ball" : "pruned"},
      {"reduction",
       std::string(reduction_name(cfg.reduction.value_or(default_reduction(cfg.ring))))},
  };
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Optimal:
      return "optimal";
    case Algorithm::MimoOptimal:
      return "mimo-optimal";
    case Algorithm::Exhaustive:
      return "exhaustive";
    case Algorithm::Clll:
      return "clll";
    case Algorithm::Qes:
      return "qes";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const Algorithm a : {Algorithm::Optimal, Algorithm::MimoOptimal, Algorithm::Exhaustive,
                            Algorithm::Clll, Algorithm::Qes}) {
    if (name == to_string(a)) return a;
  }
  throw InvalidInput("unknown algorithm '" + std::string(name) + "'");
}

void BenchConfig::validate() const {
  if (users < 1) throw InvalidInput("L must be >= 1");
  if (antennas < 1 || antennas > users) throw InvalidInput("k must satisfy 1 <= k <= L");
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  if (snr_db.empty()) throw InvalidInput("snr_db list is empty");
  for (const double s : snr_db) {
    if (!std::isfinite(s)) throw InvalidInput("snr_db values must be finite");
  }
  if (algorithms.empty()) throw InvalidInput("algorithm list is empty");
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    const Algorithm a = algorithms[i];
    if (std::find(algorithms.begin(), algorithms.begin() + static_cast<std::ptrdiff_t>(i), a) !=
        algorithms.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw InvalidInput("algorithm '" + std::string(to_string(a)) + "' listed twice");
    }
    if ((a == Algorithm::Optimal || a == Algorithm::Qes) && antennas != 1) {
      throw InvalidInput(std::string(to_string(a)) + " needs k = 1");
    }
    if ((a == Algorithm::Clll || a == Algorithm::Qes) && ring != Ring::Gaussian) {
      throw InvalidInput(std::string(to_string(a)) + " is only available over Z[j]");
    }
  }
  if (!(qes.mag_step > 0.0) || !(qes.phase_step_deg > 0.0) || qes.phase_step_deg > 90.0) {
    throw InvalidInput("qes steps must be positive, phase step <= 90 degrees");
  }
  if (!(clll.delta > 0.5) || clll.delta > 1.0) throw InvalidInput("clll delta must be in (1/2, 1]");
  if (reduction) {
    if (*reduction == SectorReduction::Quadrant && ring != Ring::Gaussian) {
      throw InvalidInput("quadrant reduction needs the gaussian ring");
    }
    if (*reduction == SectorReduction::Sextant && ring != Ring::Eisenstein) {
      throw InvalidInput("sextant reduction needs the eisenstein ring");
    }
  }
}

ComplexMatrix gen_channel(std::size_t users, std::size_t antennas, std::uint64_t seed,
                          std::uint64_t index) {
  if (users < 1 || antennas < 1) throw InvalidInput("channel dimensions must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix h(static_cast<Eigen::Index>(antennas), static_cast<Eigen::Index>(users));
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      const double re = normal(gen);
      const double im = normal(gen);
      h(r, c) = {re, im};
    }
  }
  return h;
}

double snr_to_power(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

TrialOutcome run_trial(Algorithm algorithm, const ChannelMatrix& ch, const BenchConfig& cfg) {
  return run_scored(algorithm, ch, make_objective(ch), cfg);
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CFSEARCH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<std::size_t>(v);
  }
  return n;
}

std::vector<BenchRecord> run_sweep(const BenchConfig& cfg) {
  cfg.validate();
  const std::size_t n_alg = cfg.algorithms.size();
  const auto ref = reference_index(cfg.algorithms);
  const std::size_t workers = std::min(worker_count(), cfg.trials);

  std::vector<BenchRecord> records;
  records.reserve(cfg.snr_db.size() * n_alg);
  // outcomes[trial * n_alg + alg]
  std::vector<TrialOutcome> outcomes(cfg.trials * n_alg);

  for (const double snr : cfg.snr_db) {
    const double power = snr_to_power(snr);
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&](std::size_t first, std::size_t stride) {
      for (std::size_t t = first; t < cfg.trials; t += stride) {
        {
          std::lock_guard lock(failure_mutex);
          if (failure) return;
        }
        std::size_t alg = 0;
        try {
          const ChannelMatrix ch(gen_channel(cfg.users, cfg.antennas, cfg.seed, t), power);
          const Objective obj = make_objective(ch);
          for (alg = 0; alg < n_alg; ++alg) {
            outcomes[t * n_alg + alg] = run_scored(cfg.algorithms[alg], ch, obj, cfg);
          }
        } catch (const std::exception& e) {
          std::ostringstream ctx;
          ctx << "snr_db=" << snr << " trial=" << t << " algorithm="
              << (alg < n_alg ? to_string(cfg.algorithms[alg]) : "setup") << ": " << e.what();
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = dynamic_cast<const NumericError*>(&e)
                          ? std::make_exception_ptr(NumericError(ctx.str()))
                          : std::make_exception_ptr(std::runtime_error(ctx.str()));
          }
          return;
        }
      }
    };

    if (workers <= 1) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Reduce in trial order so sums do not depend on scheduling.
    for (std::size_t alg = 0; alg < n_alg; ++alg) {
      BenchRecord rec;
      rec.snr_db = snr;
      rec.users = cfg.users;
      rec.antennas = cfg.antennas;
      rec.ring = cfg.ring;
      rec.algorithm = cfg.algorithms[alg];
      rec.trials = cfg.trials;
      rec.seed = cfg.seed;
      double rate_sum = 0.0;
      double f_sum = 0.0;
      double cpu_sum = 0.0;
      std::size_t matches = 0;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto& o = outcomes[t * n_alg + alg];
        rate_sum += o.rate;
        f_sum += o.f;
        cpu_sum += o.cpu_ms;
        if (ref) {
          const double f_ref = outcomes[t * n_alg + *ref].f;
          if (std::abs(o.f - f_ref) <= kMatchTolerance * f_ref) ++matches;
        }
      }
      const double n = static_cast<double>(cfg.trials);
      rec.avg_rate = rate_sum / n;
      rec.avg_f = f_sum / n;
      rec.cpu_ms_total = cpu_sum;
      if (ref) rec.optimal_match_fraction = static_cast<double>(matches) / n;
      records.push_back(rec);
    }
  }
  return records;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.snr_db) << ',' << r.users << ',' << r.antennas << ','
        << to_string(r.ring) << ',' << to_string(r.algorithm) << ',' << format_double(r.avg_rate)
        << ',' << format_double(r.avg_f) << ',' << format_double(r.cpu_ms_total) << ','
        << (r.optimal_match_fraction ? format_double(*r.optimal_match_fraction) : "") << ','
        << r.trials << ',' << r.seed << '\n';
  }
}

void write_csv_file(const std::string& path, const BenchConfig& cfg,
                    std::span<const BenchRecord> records) {
  std::ofstream csv(path);
  if (!csv) throw IoError("cannot open '" + path + "' for writing");
  write_csv(csv, records);
  if (!csv.flush()) throw IoError("write to '" + path + "' failed");

  const nlohmann::json meta = {
      {"csv", path},
      {"snr_definition",
       "P = 10^(snr_db/10); noise and channel entries have unit variance, channel entries are "
       "i.i.d. circularly-symmetric complex Gaussian (real and imaginary parts variance 1/2)"},
      {"avg_rate_units", "bits per user per channel use, arithmetic mean over trials"},
      {"cpu_ms_total", "thread CPU time summed over trials, search call only"},
      {"optimal_match_fraction",
       "fraction of trials whose f equals the reference (exhaustive if selected, else an exact "
       "search) to relative 1e-9; empty when no reference ran"},
      {"config", config_to_json(cfg)},
  };
  const std::string meta_path = path + ".meta.json";
  std::ofstream side(meta_path);
  if (!side) throw IoError("cannot open '" + meta_path + "' for writing");
  side << meta.dump(2) << '\n';
  if (!side.flush()) throw IoError("write to '" + meta_path + "' failed");
}

BenchConfig parse_config(std::string_view text) {
  BenchConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string raw = trim(std::string_view(body).substr(eq + 1));
    if (raw.empty()) {
      throw InvalidInput("config line " + std::to_string(line_no) + ": empty value");
    }
    const nlohmann::json v = parse_value(raw);

    if (key == "L" || key == "users") {
      cfg.users = as_number<std::size_t>(v, key);
    } else if (key == "k" || key == "antennas") {
      cfg.antennas = as_number<std::size_t>(v, key);
    } else if (key == "snr_db" || key == "snr_db_list") {
      cfg.snr_db.clear();
      if (v.is_array()) {
        for (const auto& x : v) cfg.snr_db.push_back(as_number<double>(x, key));
      } else {
        cfg.snr_db.push_back(as_number<double>(v, key));
      }
    } else if (key == "trials") {
      cfg.trials = as_number<std::size_t>(v, key);
    } else if (key == "seed") {
      cfg.seed = as_number<std::uint64_t>(v, key);
    } else if (key == "ring") {
      cfg.ring = parse_ring(as_string(v, key));
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      if (v.is_array()) {
        for (const auto& x : v) cfg.algorithms.push_back(parse_algorithm(as_string(x, key)));
      } else {
        cfg.algorithms.push_back(parse_algorithm(as_string(v, key)));
      }
    } else if (key == "qes_mag_step") {
      cfg.qes.mag_step = as_number<double>(v, key);
    } else if (key == "qes_phase_step_deg") {
      cfg.qes.phase_step_deg = as_number<double>(v, key);
    } else if (key == "qes_mag_max") {
      cfg.qes.mag_max = as_number<double>(v, key);
    } else if (key == "clll_delta") {
      cfg.clll.delta = as_number<double>(v, key);
    } else if (key == "exhaustive_mode") {
      const std::string mode = as_string(v, key);
      if (mode == "ball") {
        cfg.exhaustive_mode = ExhaustiveMode::NormBall;
      } else if (mode == "pruned") {
        cfg.exhaustive_mode = ExhaustiveMode::CostPruned;
      } else {
        throw InvalidInput("exhaustive_mode must be 'ball' or 'pruned'");
      }
    } else if (key == "reduction") {
      const std::string name = as_string(v, key);
      if (name == "default") {
        cfg.reduction.reset();
      } else {
        cfg.reduction = parse_reduction(name);
      }
    } else if (key == "output" || key == "output_path") {
      cfg.output_path = as_string(v, key);
    } else {
      throw InvalidInput("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace cfsearch::bench
