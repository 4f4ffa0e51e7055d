// lgl: generate games, run equilibrium procedures, sweep parameters, verify profiles.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lgl/lgl.hpp"

namespace {

using nlohmann::json;

// "3", "0-49", "1,4,10-12"
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(item));
    } else {
      const auto lo = std::stoull(item.substr(0, dash));
      const auto hi = std::stoull(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("bad seed range: " + item);
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
  }
  return out;
}

json parse_scalar(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) {
      if (s.find_first_of(".eE") == std::string::npos) return json(std::stoll(s));
      return json(v);
    }
  } catch (const std::exception&) {
  }
  return json(s);
}

// key=v1,v2,...  An empty value list is an empty axis.
std::pair<std::string, json> parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("grid axis needs key=values: " + spec);
  json values = json::array();
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(parse_scalar(item));
  }
  return {spec.substr(0, eq), values};
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item == "inf" ? 0.0 : std::stod(item));
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double d : parse_doubles(text)) out.push_back(static_cast<int>(d));
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Flags shared by run and sweep.
struct RunFlags {
  std::string config;
  std::string family = "linear_influence";
  std::string weights;
  std::string algo = "uniform";
  std::string oracle = "exact";
  int n = 50;
  int k = 2;
  double c = 1.0;
  double ell = 4.0;
  double gamma = 0.0;
  double alpha = 0.125;
  double eta = 0.1;
  double beta = 0.0;
  double delta = 0.1;
  int blocks = 100;
  std::string init;
  std::string seeds = "0";
  std::string out;
  std::string trace;
  std::vector<std::string> grid;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON experiment config (flags below are ignored)");
    app->add_option("--family", family, "linear-influence | lower-bound | tiny-tensor | independent | constant");
    app->add_option("--weights", weights, "linear-influence weight template: uniform | matching_pennies");
    app->add_option("--algo", algo, "uniform | one_step | two_step | un | communication | ucn_gamma | bu");
    app->add_option("--oracle", oracle, "exact | sampling | stochastic");
    app->add_option("--n", n, "players");
    app->add_option("--k", k, "actions");
    app->add_option("--c", c, "largeness constant (gamma = c/n)");
    app->add_option("--ell", ell, "lower-bound family parameter");
    app->add_option("--gamma", gamma, "tiny-tensor largeness");
    app->add_option("--alpha", alpha, "target accuracy of the plane dynamics");
    app->add_option("--eta", eta, "failure probability of the plane dynamics");
    app->add_option("--beta", beta, "pin the sampling accuracy");
    app->add_option("--delta", delta, "sampling confidence");
    app->add_option("--blocks", blocks, "BU block count N");
    app->add_option("--init", init, "BU initial blocks: zero | random");
    app->add_option("--seeds", seeds, "seed list, e.g. 0-49 or 1,2,5");
    app->add_option("--out", out, "output path (stdout if omitted)");
    app->add_option("--trace", trace, "JSON-lines log of every pure query");
    app->add_option("--grid", grid, "sweep axis key=v1,v2,... (repeatable)");
  }

  lgl::ExperimentConfig build() const {
    if (!config.empty()) {
      lgl::ExperimentConfig cfg = lgl::parse_config(read_json_file(config));
      if (!out.empty()) cfg.out = out;
      if (!trace.empty()) cfg.trace = trace;
      return cfg;
    }
    json j;
    json params{{"n", n}, {"k", k}, {"c", c}};
    const std::string fam = lgl::canonical_name(family);
    if (fam == "lower_bound") params = {{"n", n}, {"ell", ell}};
    if (fam == "tiny_tensor") params = {{"n", n}, {"k", k}, {"gamma", gamma > 0 ? gamma : c / n}};
    if (!weights.empty()) params["weights"] = weights;
    j["family"] = {{"family", fam}, {"params", params}};
    json ap{{"alpha", alpha}, {"eta", eta}, {"N", blocks}};
    if (lgl::canonical_name(algo) == "ucn_gamma") ap["c"] = c;
    if (!init.empty()) ap["init"] = init;
    j["algorithm"] = {{"name", algo}, {"params", ap}};
    j["oracle"] = {{"mode", oracle}, {"beta", beta}, {"delta", delta}};
    j["seeds"] = parse_seed_list(seeds);
    j["out"] = out;
    j["trace"] = trace;
    json g = json::object();
    for (const auto& axis : grid) {
      auto [key, values] = parse_axis(axis);
      g[key] = values;
    }
    j["grid"] = g;
    return lgl::parse_config(j);
  }
};

int cmd_generate(const std::string& family, int n, int k, double c, double ell, double gamma,
                 const std::string& weights, std::uint64_t seed, bool materialize, const std::string& out) {
  lgl::FamilyDescriptor d;
  d.family = lgl::canonical_name(family);
  d.seed = seed;
  if (d.family == "lower_bound") {
    d.params = {{"n", n}, {"ell", ell}};
  } else if (d.family == "tiny_tensor") {
    d.params = {{"n", n}, {"k", k}, {"gamma", gamma > 0 ? gamma : c / n}};
  } else if (d.family == "constant") {
    d.params = {{"n", n}, {"k", k}, {"c", c}};
  } else {
    d.params = {{"n", n}, {"k", k}, {"c", c}};
    if (!weights.empty()) d.params["weights"] = weights;
  }
  const lgl::GamePtr game = lgl::make_game(d);
  json j;
  if (materialize) {
    j = lgl::tensor_game_to_json(*lgl::materialize(*game));
  } else {
    j = d;
  }
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_run(const RunFlags& flags) {
  const lgl::ExperimentConfig cfg = flags.build();
  std::ofstream trace_file;
  if (!cfg.trace.empty()) {
    trace_file.open(cfg.trace, std::ios::binary);
    if (!trace_file) throw std::runtime_error("cannot write " + cfg.trace);
  }
  json reports = json::array();
  int violations = 0;
  for (std::uint64_t seed : cfg.seeds) {
    const lgl::RunReport r = lgl::run_once(cfg, seed, trace_file.is_open() ? &trace_file : nullptr);
    if (r.violates_bound()) {
      ++violations;
      std::cerr << "bound violated: seed " << seed << " max_regret " << lgl::format_number(r.max_regret)
                << " > " << lgl::format_number(*r.bound) << "\n";
    }
    reports.push_back(r);
  }
  write_text(cfg.out, reports.dump(2) + "\n");
  return violations == 0 ? 0 : 1;
}

int cmd_sweep(const RunFlags& flags, const std::string& bounds, const std::string& ks,
              const std::string& ns, const std::string& compare, bool timing, unsigned threads) {
  if (!compare.empty()) {
    write_text(flags.out, lgl::comparison_csv(parse_doubles(compare)));
    return 0;
  }
  if (!bounds.empty()) {
    write_text(flags.out, lgl::bounds_table_csv(parse_doubles(bounds), parse_ints(ks), parse_ints(ns),
                                                flags.alpha > 0 && flags.oracle != "exact" ? flags.alpha : 0.0));
    return 0;
  }
  const lgl::ExperimentConfig cfg = flags.build();
  lgl::SweepOptions opts;
  opts.threads = threads > 0 ? threads : lgl::worker_count();
  opts.timing = timing;
  write_text(cfg.out, lgl::run_sweep(cfg, opts));
  return 0;
}

// Profile file: [[p_i0, ..., p_i(k-1)], ...] or, for binary games, [p_0, p_1, ...].
lgl::MixedProfile load_profile(const json& j, int k) {
  if (j.is_object()) return load_profile(j.at("profile"), k);
  if (!j.is_array() || j.empty()) throw std::invalid_argument("profile must be a non-empty list");
  if (j.front().is_array()) return lgl::MixedProfile::from_rows(j.get<std::vector<std::vector<double>>>());
  if (k != 2) throw std::invalid_argument("a flat profile list needs a binary game");
  return lgl::MixedProfile::from_binary(j.get<std::vector<double>>());
}

int cmd_verify(const std::string& game_path, const std::string& profile_path, bool uniform,
               double eps, bool wsne, const std::string& out) {
  const lgl::GamePtr game = lgl::load_game(read_json_file(game_path));
  const lgl::MixedProfile p = uniform ? lgl::MixedProfile::uniform(game->num_players(), game->num_actions())
                                      : load_profile(read_json_file(profile_path), game->num_actions());
  game->validate(p);
  const lgl::RegretReport report = lgl::regret_report(*game, p);
  const bool ok = wsne ? lgl::is_wsne(report, eps) : report.max_regret <= eps + 1e-12;
  json j = lgl::to_json(report);
  j["eps"] = eps;
  j["kind"] = wsne ? "wsne" : "ne";
  j["ok"] = ok;
  write_text(out, j.dump(2) + "\n");
  return ok ? 0 : 1;
}

int cmd_simulate(const std::string& game_path, const std::string& dynamic, double c, double step,
                 double horizon, int every, const std::string& out) {
  const lgl::GamePtr game = lgl::load_game(read_json_file(game_path));
  const std::string name = lgl::canonical_name(dynamic);
  lgl::Trajectory t;
  if (name == "ucn") {
    t = lgl::simulate_ucn(*game, step, horizon);
  } else if (name == "ucn_gamma") {
    t = lgl::simulate_ucn_gamma(*game, c > 0 ? c : game->largeness_c(), step, horizon);
  } else {
    throw std::invalid_argument("unknown dynamic: " + dynamic);
  }
  std::ostringstream csv;
  t.write_csv(csv, every);
  write_text(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate equilibria of large games"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a game descriptor");
  std::string g_family = "linear_influence";
  std::string g_weights;
  std::string g_out;
  int g_n = 50;
  int g_k = 2;
  double g_c = 1.0;
  double g_ell = 4.0;
  double g_gamma = 0.0;
  std::uint64_t g_seed = 0;
  bool g_materialize = false;
  gen->add_option("--family", g_family, "game family");
  gen->add_option("--weights", g_weights, "linear-influence weight template");
  gen->add_option("--n", g_n, "players");
  gen->add_option("--k", g_k, "actions");
  gen->add_option("--c", g_c, "largeness constant");
  gen->add_option("--ell", g_ell, "lower-bound parameter");
  gen->add_option("--gamma", g_gamma, "tiny-tensor largeness");
  gen->add_option("--seed,--seeds", g_seed, "generator seed");
  gen->add_flag("--materialize", g_materialize, "write every payoff explicitly");
  gen->add_option("--out", g_out, "output path");

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run an algorithm on one game per seed");
  run_flags.attach(run);

  RunFlags sweep_flags;
  std::string s_bounds;
  std::string s_ks = "2";
  std::string s_ns = "100";
  std::string s_compare;
  bool s_timing = false;
  unsigned s_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write CSV");
  sweep_flags.attach(sweep);
  sweep->add_option("--bounds", s_bounds, "write the BU bound table for these c values");
  sweep->add_option("--bound-k", s_ks, "k values for --bounds");
  sweep->add_option("--bound-N", s_ns, "N values for --bounds (inf for the limit)");
  sweep->add_option("--compare", s_compare, "compare plane-dynamic and BU bounds at these c values");
  sweep->add_flag("--timing", s_timing, "fill wall_ms (output is then not reproducible)");
  sweep->add_option("--threads", s_threads, "worker threads (default LGL_THREADS or all cores)");

  auto* verify = app.add_subcommand("verify", "check a profile for approximate equilibrium");
  std::string v_game;
  std::string v_profile;
  std::string v_out;
  bool v_uniform = false;
  bool v_wsne = false;
  double v_eps = 0.0;
  verify->add_option("--game", v_game, "game JSON (descriptor or tensor)")->required();
  verify->add_option("--profile", v_profile, "profile JSON");
  verify->add_flag("--uniform", v_uniform, "check the uniform profile");
  verify->add_option("--eps", v_eps, "tolerance")->required();
  verify->add_flag("--wsne", v_wsne, "check the well-supported notion");
  verify->add_option("--out", v_out, "output path");

  auto* sim = app.add_subcommand("simulate", "integrate the continuous plane dynamic and write its trajectory");
  std::string m_game;
  std::string m_dynamic = "ucn";
  std::string m_out;
  double m_c = 0.0;
  double m_step = 1e-3;
  double m_horizon = 1.0;
  int m_every = 1;
  sim->add_option("--game", m_game, "game JSON (descriptor or tensor)")->required();
  sim->add_option("--dynamic", m_dynamic, "ucn | ucn_gamma");
  sim->add_option("--c", m_c, "largeness constant for ucn_gamma (default: the game's)");
  sim->add_option("--step", m_step, "Euler step h");
  sim->add_option("--horizon", m_horizon, "end time T");
  sim->add_option("--every", m_every, "keep every m-th time step");
  sim->add_option("--out", m_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      return cmd_generate(g_family, g_n, g_k, g_c, g_ell, g_gamma, g_weights, g_seed, g_materialize, g_out);
    }
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags, s_bounds, s_ks, s_ns, s_compare, s_timing, s_threads);
    if (*sim) return cmd_simulate(m_game, m_dynamic, m_c, m_step, m_horizon, m_every, m_out);
    if (*verify) {
      if (!v_uniform && v_profile.empty()) throw std::invalid_argument("verify needs --profile or --uniform");
      return cmd_verify(v_game, v_profile, v_uniform, v_eps, v_wsne, v_out);
    }
  } catch (const lgl::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
