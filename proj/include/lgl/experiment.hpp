#pragma once

// Batch experiment plumbing shared by the command-line tool and the tests:
// config parsing, single runs with declared bounds, parameter sweeps and
// bound tables. All output is deterministic given the config and seeds.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgl/binary.hpp"
#include "lgl/blocks.hpp"
#include "lgl/families.hpp"
#include "lgl/oracle.hpp"
#include "lgl/report.hpp"

namespace lgl {

using nlohmann::json;

struct OracleConfig {
  std::string mode = "exact";  // exact | sampling | stochastic
  double beta = 0.0;           // 0: let the procedure choose its accuracy
  double delta = 0.1;
};

struct AlgorithmConfig {
  std::string name;
  json params = json::object();
};

struct ExperimentConfig {
  FamilyDescriptor family;  // the seed field is replaced by each run seed
  AlgorithmConfig algorithm;
  OracleConfig oracle;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string trace;
  json grid = json::object();  // sweeps only: axis name -> list of values
};

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"uniform", "one_step",  "two_step", "un",
                                              "communication", "ucn_gamma", "bu"};
  return names;
}

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"linear_influence", "lower_bound", "tiny_tensor",
                                              "independent", "constant"};
  return names;
}

// Family parameters; every other grid axis is an algorithm parameter.
inline bool is_family_key(const std::string& key) {
  static const std::vector<std::string> keys{"n", "k", "c", "weights", "ell", "gamma", "values", "value"};
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

// "linear-influence" and "linear_influence" name the same thing.
inline std::string canonical_name(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

inline std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> out;
  if (j.is_array()) {
    for (const auto& s : j) out.push_back(s.get<std::uint64_t>());
  } else if (j.is_object()) {
    const auto first = j.value("first", std::uint64_t{0});
    const auto count = j.at("count").get<std::uint64_t>();
    for (std::uint64_t s = 0; s < count; ++s) out.push_back(first + s);
  } else {
    out.push_back(j.get<std::uint64_t>());
  }
  return out;
}

inline void validate(const ExperimentConfig& cfg) {
  const auto& fams = family_names();
  if (std::find(fams.begin(), fams.end(), cfg.family.family) == fams.end()) {
    throw std::invalid_argument("unknown game family: " + cfg.family.family);
  }
  const auto& algos = algorithm_names();
  if (std::find(algos.begin(), algos.end(), cfg.algorithm.name) == algos.end()) {
    throw std::invalid_argument("unknown algorithm: " + cfg.algorithm.name);
  }
  if (cfg.oracle.mode != "exact" && cfg.oracle.mode != "sampling" && cfg.oracle.mode != "stochastic") {
    throw std::invalid_argument("oracle mode must be exact, sampling or stochastic");
  }
  if (cfg.seeds.empty()) throw std::invalid_argument("config needs at least one seed");
}

inline ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  const json& fam = j.at("family");
  if (fam.is_string()) {
    cfg.family.family = canonical_name(fam.get<std::string>());
    cfg.family.params = j.value("params", json::object());
  } else {
    cfg.family = fam.get<FamilyDescriptor>();
    cfg.family.family = canonical_name(cfg.family.family);
  }
  const json& algo = j.at("algorithm");
  if (algo.is_string()) {
    cfg.algorithm.name = canonical_name(algo.get<std::string>());
  } else {
    cfg.algorithm.name = canonical_name(algo.at("name").get<std::string>());
    cfg.algorithm.params = algo.value("params", json::object());
  }
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    if (o.is_string()) {
      cfg.oracle.mode = o.get<std::string>();
    } else {
      cfg.oracle.mode = o.value("mode", std::string("exact"));
      cfg.oracle.beta = o.value("beta", 0.0);
      cfg.oracle.delta = o.value("delta", 0.1);
    }
  }
  cfg.seeds = j.contains("seeds") ? parse_seeds(j.at("seeds")) : std::vector<std::uint64_t>{0};
  cfg.out = j.value("out", std::string());
  cfg.trace = j.value("trace", std::string());
  cfg.grid = j.value("grid", json::object());
  validate(cfg);
  return cfg;
}

inline json to_json(const ExperimentConfig& cfg) {
  json j{{"family", cfg.family},
         {"algorithm", {{"name", cfg.algorithm.name}, {"params", cfg.algorithm.params}}},
         {"oracle", {{"mode", cfg.oracle.mode}, {"beta", cfg.oracle.beta}, {"delta", cfg.oracle.delta}}},
         {"seeds", cfg.seeds}};
  if (!cfg.out.empty()) j["out"] = cfg.out;
  if (!cfg.trace.empty()) j["trace"] = cfg.trace;
  if (!cfg.grid.empty()) j["grid"] = cfg.grid;
  return j;
}

namespace detail {

inline UNParams un_params(const json& p) {
  return UNParams(p.value("alpha", 0.125), p.value("eta", 0.1));
}

// The guarantee a run is held to in exact mode, if one applies to this game.
inline std::optional<double> declared_bound(const std::string& algo, const json& params,
                                            const Game& game) {
  const double c = game.largeness_c();
  const bool one_over_n = c <= 1.0 + 1e-12;
  if (algo == "uniform") return 0.5;
  if (algo == "bu") return bu_bound(c, game.num_actions(), params.value("N", 100), 0.0).epsilon;
  if (algo == "ucn_gamma") {
    const double declared_c = params.value("c", c);
    if (declared_c + 1e-12 < c) return std::nullopt;
    return gamma_regret_bound(declared_c) + params.value("alpha", 0.125);
  }
  if (!one_over_n) return std::nullopt;
  if (algo == "one_step") return 0.272;
  if (algo == "two_step") return 0.25;
  if (algo == "un") return 0.125 + params.value("alpha", 0.125);
  if (algo == "communication") return 137.0 / 1100.0 + params.value("alpha", 0.125);
  return std::nullopt;
}

}  // namespace detail

// One seed: generate the game, open a session, run the algorithm.
inline RunReport run_once(const ExperimentConfig& cfg, std::uint64_t seed,
                          std::ostream* trace = nullptr) {
  FamilyDescriptor desc = cfg.family;
  desc.seed = seed;
  const GamePtr game = make_game(desc);

  std::optional<StochasticGame> noisy;
  std::optional<OracleSession> session;
  const std::uint64_t session_seed = mix_seed(seed, 0x5e55);
  if (cfg.oracle.mode == "stochastic") {
    noisy.emplace(game);
    session.emplace(*noisy, session_seed);
  } else {
    session.emplace(*game, session_seed);
  }
  session->set_trace(trace);

  const bool exact = cfg.oracle.mode == "exact";
  MixedOracle oracle = exact ? MixedOracle::exact(*session)
                             : MixedOracle::sampled(*session, cfg.oracle.beta > 0 ? cfg.oracle.beta : 0.1,
                                                    cfg.oracle.delta);
  if (!exact && cfg.oracle.beta > 0.0) oracle.pin_beta(cfg.oracle.beta);

  const std::string& algo = cfg.algorithm.name;
  const json& params = cfg.algorithm.params;
  RunReport report;
  if (algo == "uniform") {
    report = uniform_run(oracle).report;
  } else if (algo == "one_step") {
    report = one_step(oracle, params.value("threshold", kOneStepThreshold),
                      params.value("shift", kOneStepShift))
                 .report;
  } else if (algo == "two_step") {
    report = two_step(oracle).report;
  } else if (algo == "un") {
    report = un(oracle, detail::un_params(params)).report;
  } else if (algo == "communication") {
    report = communication_dynamic(oracle, detail::un_params(params)).report;
  } else if (algo == "ucn_gamma") {
    report = ucn_gamma_discrete(oracle, detail::un_params(params), params.value("c", game->largeness_c()))
                 .report;
  } else if (algo == "bu") {
    const std::string init = params.value("init", std::string("zero"));
    if (init != "zero" && init != "random") throw std::invalid_argument("bu init must be zero or random");
    report = bu(oracle, params.value("N", 100), init == "zero" ? BlockInit::all_zero : BlockInit::random,
                seed)
                 .report;
  } else {
    throw std::invalid_argument("unknown algorithm: " + algo);
  }
  report.seed = seed;
  if (exact) report.bound = detail::declared_bound(algo, params, *game);
  return report;
}

// ---- CSV helpers -------------------------------------------------------------

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

// ---- sweeps ------------------------------------------------------------------

// Worker count: LGL_THREADS if set and positive, else the hardware count.
inline unsigned worker_count() {
  if (const char* env = std::getenv("LGL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct SweepPoint {
  ExperimentConfig config;
  json values = json::object();  // grid coordinates of this point
};

// Cross product of the grid axes, in sorted axis order. An empty axis makes
// the whole product empty; no grid at all is a single point.
inline std::vector<SweepPoint> expand_grid(const ExperimentConfig& base) {
  std::vector<SweepPoint> points{{base, json::object()}};
  for (const auto& [key, axis] : base.grid.items()) {
    if (!axis.is_array()) throw std::invalid_argument("grid axis '" + key + "' must be a list");
    std::vector<SweepPoint> next;
    for (const auto& point : points) {
      for (const auto& v : axis) {
        SweepPoint p = point;
        p.values[key] = v;
        if (key == "algorithm") {
          p.config.algorithm.name = canonical_name(v.get<std::string>());
        } else if (is_family_key(key)) {
          p.config.family.params[key] = v;
        } else {
          p.config.algorithm.params[key] = v;
        }
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  for (auto& p : points) validate(p.config);
  return points;
}

struct SweepOptions {
  unsigned threads = 1;
  bool timing = false;  // off keeps wall_ms at 0 so reruns are byte-identical
};

// Runs every grid point for every seed and returns the CSV text. Rows follow
// grid order, then seed order, whatever the thread interleaving.
inline std::string run_sweep(const ExperimentConfig& cfg, const SweepOptions& opts = {}) {
  std::vector<std::string> param_cols;
  for (const auto& [key, axis] : cfg.grid.items()) {
    if (key != "algorithm" && key != "n" && key != "c" && key != "k") param_cols.push_back(key);
  }
  std::ostringstream csv;
  csv << "algorithm,n,c,k";
  for (const auto& col : param_cols) csv << ',' << col;
  csv << ",seed,max_regret,pure_queries,qm_calls,wall_ms\n";

  const std::vector<SweepPoint> points = expand_grid(cfg);
  struct Job {
    std::size_t point;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::uint64_t s : cfg.seeds) jobs.push_back({i, s});
  }
  std::vector<std::string> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const SweepPoint& pt = points[jobs[j].point];
      try {
        const auto start = std::chrono::steady_clock::now();
        const RunReport r = run_once(pt.config, jobs[j].seed);
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
        std::ostringstream row;
        row << r.algorithm << ',' << r.n << ',' << format_number(r.c) << ',' << r.k;
        for (const auto& col : param_cols) row << ',' << format_cell(pt.values.at(col));
        row << ',' << r.seed << ',' << format_number(r.max_regret) << ',' << r.pure_queries << ','
            << r.qm_calls << ',' << (opts.timing ? format_number(ms.count()) : "0") << '\n';
        rows[j] = row.str();
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error("sweep: " + e);
  }
  for (const auto& row : rows) csv << row;
  return csv.str();
}

// ---- bound tables ------------------------------------------------------------

// N <= 0 stands for the N -> infinity limit.
inline std::string bounds_table_csv(const std::vector<double>& cs, const std::vector<int>& ks,
                                    const std::vector<int>& blocks, double alpha = 0.0) {
  std::ostringstream csv;
  csv << "c,k,N,epsilon_case,epsilon\n";
  for (double c : cs) {
    for (int k : ks) {
      for (int n_blocks : blocks) {
        const double N = n_blocks > 0 ? n_blocks : std::numeric_limits<double>::infinity();
        const BoundValue b = bu_bound(c, k, N, alpha);
        csv << format_number(c) << ',' << k << ',' << (n_blocks > 0 ? std::to_string(n_blocks) : "inf")
            << ',' << b.epsilon_case << ',' << format_number(b.epsilon) << '\n';
      }
    }
  }
  return csv.str();
}

// Plane dynamic vs block update for binary games as N -> infinity.
inline std::string comparison_csv(const std::vector<double>& cs) {
  std::ostringstream csv;
  csv << "c,ucn_gamma_epsilon,bu_epsilon,bu_case,ucn_gamma_better\n";
  for (double c : cs) {
    const double ucn = gamma_regret_bound(c);
    const BoundValue b = bu_bound(c, 2, std::numeric_limits<double>::infinity());
    csv << format_number(c) << ',' << format_number(ucn) << ',' << format_number(b.epsilon) << ','
        << b.epsilon_case << ',' << (ucn <= b.epsilon ? 1 : 0) << '\n';
  }
  return csv.str();
}

}  // namespace lgl
