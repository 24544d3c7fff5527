// Command-line front door: solve spin instances with any of the physics
// solvers, brute-force small instances, compile and solve least-squares
// problems, and run benchmark sweeps. Exit codes: 0 success, 1 usage error,
// 2 runtime failure (divergence, unreadable inputs, size guards).

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lagrising/engine.hpp"
#include "lagrising/errors.hpp"
#include "lagrising/iterators.hpp"
#include "lagrising/regression.hpp"

using namespace lagrising;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

std::string base_name(const std::string& path) {
  auto pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

Instance load_instance(const std::string& path) {
  std::string text = read_file(path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
    return instance_from_json(text);
  Instance inst = parse_gset(text, base_name(path));
  return inst;
}

std::vector<double> parse_weight_list(const std::string& csv) {
  std::vector<double> weights;
  std::stringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    weights.push_back(std::stod(tok));
  }
  if (weights.empty()) throw ArgumentError("empty weight list");
  return weights;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

int thread_cap() {
  if (const char* env = std::getenv("LAGRANGE_ISING_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// option plumbing: config-file values fill in anything not passed as a flag

struct FlagValues {
  std::string solver = "opo";
  int restarts = 4;
  std::uint64_t seed = 1;
  std::string method = "rk4";
  double dt = 0.0;          // 0 = solver default
  long steps = 0;           // 0 = solver default
  long record_every = 100;
  double divergence_bound = 1e6;
  std::string schedule;     // constant | ramp | adaptive; empty = solver default
  double gain = 0.0;        // schedule intercept a
  double ramp_rate = 0.0;   // schedule slope b
  double gamma_max = 0.0;
  double kappa_p = 0.0;
  double alpha = 1.0;
  double beta_sat = -1.0;   // <0 = solver default
  double u_rot = 0.0;
  double kerr_k = 1.0;
  double xi0 = 0.5;
  double beta_leleu = 0.1;
  double noise_sigma = 0.2;
  double noise_decay = 0.0;
  double soljacic_alpha = std::numeric_limits<double>::quiet_NaN();
  double penalty_c = kDefaultPenalty;
  double kappa = kDefaultKappa;
  double kappa_prime = kDefaultKappaPrime;
  bool plateau = false;
};

struct SolverFlags {
  FlagValues v;
  std::map<std::string, CLI::Option*> opts;
  std::string config_path;

  void attach(CLI::App* cmd) {
    opts["solver"] = cmd->add_option("--solver", v.solver, "solver tag");
    opts["restarts"] = cmd->add_option("--restarts", v.restarts, "independent restarts");
    opts["seed"] = cmd->add_option("--seed", v.seed, "base seed; restart k uses seed+k");
    opts["method"] = cmd->add_option("--method", v.method, "euler or rk4");
    opts["dt"] = cmd->add_option("--dt", v.dt, "time step (iteration step for discrete solvers)");
    opts["steps"] = cmd->add_option("--steps", v.steps, "step count");
    opts["record-every"] = cmd->add_option("--record-every", v.record_every, "sampling stride");
    opts["divergence-bound"] =
        cmd->add_option("--divergence-bound", v.divergence_bound, "abort when |state| exceeds this");
    opts["schedule"] = cmd->add_option("--schedule", v.schedule, "constant, ramp, or adaptive");
    opts["gain"] = cmd->add_option("--gain", v.gain, "schedule intercept a");
    opts["ramp-rate"] = cmd->add_option("--ramp-rate", v.ramp_rate, "schedule slope b");
    opts["gamma-max"] = cmd->add_option("--gamma-max", v.gamma_max, "gain clamp");
    opts["kappa-p"] = cmd->add_option("--kappa-p", v.kappa_p, "multiplier ascent rate");
    opts["alpha"] = cmd->add_option("--alpha", v.alpha, "oscillator loss");
    opts["beta-sat"] = cmd->add_option("--beta-sat", v.beta_sat, "cubic saturation / attenuation");
    opts["u-rot"] = cmd->add_option("--u-rot", v.u_rot, "nonlinear rotation strength");
    opts["kerr-k"] = cmd->add_option("--kerr-k", v.kerr_k, "Kerr coefficient");
    opts["xi0"] = cmd->add_option("--xi0", v.xi0, "elastic coupling strength");
    opts["beta-leleu"] = cmd->add_option("--beta-leleu", v.beta_leleu, "error-variable rate");
    opts["noise-sigma"] = cmd->add_option("--noise-sigma", v.noise_sigma, "threshold-iteration noise");
    opts["noise-decay"] =
        cmd->add_option("--noise-decay", v.noise_decay, "linear noise decay fraction over the run");
    opts["soljacic-alpha"] =
        cmd->add_option("--soljacic-alpha", v.soljacic_alpha, "spectral shift (default: auto)");
    opts["penalty-c"] = cmd->add_option("--penalty-c", v.penalty_c, "augmentation strength");
    opts["kappa"] = cmd->add_option("--kappa", v.kappa, "descent step size");
    opts["kappa-prime"] = cmd->add_option("--kappa-prime", v.kappa_prime, "ascent step size");
    opts["plateau"] = cmd->add_flag("--plateau", v.plateau,
                                    "stop once the merit is flat for 100 consecutive samples");
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  }

  // config-file values apply only where no flag was passed
  void apply_config() {
    if (config_path.empty()) return;
    nlohmann::json cfg;
    try {
      cfg = nlohmann::json::parse(read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad config JSON: " + std::string(e.what()));
    }
    auto want = [&](const char* key) {
      return cfg.contains(key) && opts.count(key) && opts[key]->count() == 0;
    };
    if (want("solver")) v.solver = cfg["solver"].get<std::string>();
    if (want("restarts")) v.restarts = cfg["restarts"].get<int>();
    if (want("seed")) v.seed = cfg["seed"].get<std::uint64_t>();
    if (want("method")) v.method = cfg["method"].get<std::string>();
    if (want("dt")) v.dt = cfg["dt"].get<double>();
    if (want("steps")) v.steps = cfg["steps"].get<long>();
    if (want("record-every")) v.record_every = cfg["record-every"].get<long>();
    if (want("divergence-bound")) v.divergence_bound = cfg["divergence-bound"].get<double>();
    if (want("schedule")) v.schedule = cfg["schedule"].get<std::string>();
    if (want("gain")) v.gain = cfg["gain"].get<double>();
    if (want("ramp-rate")) v.ramp_rate = cfg["ramp-rate"].get<double>();
    if (want("gamma-max")) v.gamma_max = cfg["gamma-max"].get<double>();
    if (want("kappa-p")) v.kappa_p = cfg["kappa-p"].get<double>();
    if (want("alpha")) v.alpha = cfg["alpha"].get<double>();
    if (want("beta-sat")) v.beta_sat = cfg["beta-sat"].get<double>();
    if (want("u-rot")) v.u_rot = cfg["u-rot"].get<double>();
    if (want("kerr-k")) v.kerr_k = cfg["kerr-k"].get<double>();
    if (want("xi0")) v.xi0 = cfg["xi0"].get<double>();
    if (want("beta-leleu")) v.beta_leleu = cfg["beta-leleu"].get<double>();
    if (want("noise-sigma")) v.noise_sigma = cfg["noise-sigma"].get<double>();
    if (want("noise-decay")) v.noise_decay = cfg["noise-decay"].get<double>();
    if (want("penalty-c")) v.penalty_c = cfg["penalty-c"].get<double>();
    if (want("kappa")) v.kappa = cfg["kappa"].get<double>();
    if (want("kappa-prime")) v.kappa_prime = cfg["kappa-prime"].get<double>();
    if (want("plateau")) v.plateau = cfg["plateau"].get<bool>();
  }

  bool passed(const char* key) const {
    auto it = opts.find(key);
    return it != opts.end() && it->second->count() > 0;
  }
};

// tuned per-solver defaults; anything the user set explicitly wins
SolveOptions build_options(const SolverFlags& f, std::size_t n) {
  const std::string& tag = f.v.solver;
  if (!is_solver_tag(tag)) {
    std::string tags;
    for (const auto& t : solver_tags()) tags += (tags.empty() ? "" : ", ") + t;
    throw ArgumentError("unknown solver '" + tag + "'; valid tags: " + tags);
  }

  SolveOptions opt;
  opt.solver = tag;
  opt.restarts = f.v.restarts;
  opt.seed = f.v.seed;
  opt.noise_sigma = f.v.noise_sigma;
  opt.noise_decay = f.v.noise_decay;
  opt.soljacic_alpha = f.v.soljacic_alpha;
  opt.penalty_c = f.v.penalty_c;
  opt.kappa = f.v.kappa;
  opt.kappa_prime = f.v.kappa_prime;

  const bool discrete = tag == "matmul" || tag == "soljacic" || tag == "lagrange";
  opt.cfg.method = f.v.method == "euler" ? Method::euler : Method::rk4;
  if (f.v.method != "euler" && f.v.method != "rk4")
    throw ArgumentError("unknown method '" + f.v.method + "'");
  opt.cfg.dt = f.v.dt > 0.0 ? f.v.dt : (discrete ? 0.05 : 0.01);
  opt.cfg.steps = f.v.steps > 0 ? f.v.steps : (discrete ? 2000 : 10000);
  opt.cfg.record_every = f.v.record_every;
  opt.cfg.divergence_bound = f.v.divergence_bound;
  opt.cfg.stop_on_plateau = f.v.plateau;
  const double horizon = opt.cfg.dt * static_cast<double>(opt.cfg.steps);

  OscParams& p = opt.params;
  p.alpha = {f.v.alpha};
  p.u_rot = f.v.u_rot;
  p.kerr_k = f.v.kerr_k;
  p.xi0 = f.v.xi0;
  p.beta_leleu = f.v.beta_leleu;
  if (tag == "radio" && !f.passed("alpha")) {
    p = OscParams::radio_circuit((n > 1 ? n - 1 : 1) / 4.0, 1.0, n);
    p.u_rot = f.v.u_rot;
  }
  if (tag == "phase") p.coupling_scale = 1.0;
  if (f.v.beta_sat >= 0.0)
    p.beta_sat = f.v.beta_sat;
  else
    p.beta_sat = tag == "opo" ? 0.2 : tag == "polariton" ? 0.5 : 0.0;

  // schedule: explicit flags override the per-solver defaults
  std::string kind = f.v.schedule;
  if (kind.empty()) kind = (tag == "fiber" || tag == "radio") ? "adaptive"
                            : (tag == "leleu" || tag == "matmul") ? "constant"
                                                                  : "ramp";
  double a_max = 0.0;
  for (double a : p.alpha) a_max = std::max(a_max, a);
  if (kind == "constant") {
    opt.schedule.kind = GainSchedule::Kind::constant;
    opt.schedule.a = f.passed("gain") ? f.v.gain : (tag == "leleu" ? a_max : 1.0);
  } else if (kind == "ramp") {
    opt.schedule.kind = GainSchedule::Kind::linear_ramp;
    opt.schedule.a = f.passed("gain") ? f.v.gain : 0.0;
    opt.schedule.gamma_max = f.passed("gamma-max") ? f.v.gamma_max : 2.0 * std::max(a_max, 1.0);
    // cross the highest loss rate comfortably within the run
    opt.schedule.b = f.passed("ramp-rate") ? f.v.ramp_rate
                                           : (opt.schedule.gamma_max - opt.schedule.a) / horizon * 2.0;
  } else if (kind == "adaptive") {
    opt.schedule.kind = GainSchedule::Kind::adaptive;
    opt.schedule.a = f.passed("gain") ? f.v.gain : 0.0;
    opt.schedule.kappa_p = f.passed("kappa-p") ? f.v.kappa_p : 0.05;
  } else {
    throw ArgumentError("unknown schedule '" + kind + "'");
  }
  if (f.passed("gamma-max")) opt.schedule.gamma_max = f.v.gamma_max;
  if (f.passed("kappa-p")) {
    opt.schedule.kappa_p = f.v.kappa_p;
    p.kappa_p = f.v.kappa_p;
  }
  return opt;
}

ordered_json record_to_json(const RunRecord& rec) {
  return ordered_json::parse(to_json(rec));
}

ordered_json runs_to_json(const std::vector<RunSummary>& runs) {
  auto arr = ordered_json::array();
  for (const auto& r : runs) {
    ordered_json row;
    row["seed"] = r.seed;
    row["final_energy"] = r.final_energy;
    row["diverged"] = r.diverged;
    if (r.diverged) row["diagnostic"] = r.diagnostic;
    row["wall_time_s"] = r.wall_time_s;
    arr.push_back(std::move(row));
  }
  return arr;
}

// ---------------------------------------------------------------------------
// subcommands

struct InstanceFlags {
  std::vector<std::string> paths;
  long random_n = 0;
  double random_density = 0.5;
  std::string random_weights = "-1,1";
  std::uint64_t random_seed = 1;

  void attach(CLI::App* cmd, bool repeatable) {
    if (repeatable)
      cmd->add_option("--instance", paths, "instance file (.gset text or .json)");
    else
      cmd->add_option("--instance", paths, "instance file (.gset text or .json)")
          ->expected(0, 1);
    cmd->add_option("--random-n", random_n, "generate a random instance with n spins");
    cmd->add_option("--random-density", random_density, "edge probability");
    cmd->add_option("--random-weights", random_weights, "comma-separated weight set");
    cmd->add_option("--random-seed", random_seed, "generator seed");
  }

  std::vector<std::pair<std::string, Instance>> load() const {
    std::vector<std::pair<std::string, Instance>> out;
    for (const auto& p : paths) out.emplace_back(p, load_instance(p));
    if (random_n > 0) {
      auto weights = parse_weight_list(random_weights);
      Instance inst = random_instance(static_cast<std::size_t>(random_n), random_density,
                                      weights, random_seed);
      out.emplace_back(inst.name, inst);
    }
    return out;
  }
};

int cmd_solve(const InstanceFlags& inst_flags, const SolverFlags& flags,
              const std::string& out_path, const std::string& traj_path) {
  auto instances = inst_flags.load();
  if (instances.size() != 1) {
    std::cerr << "solve: exactly one instance required (--instance or --random-n)\n";
    return kExitUsage;
  }
  Instance inst = instances[0].second;

  Instance run_inst = inst;
  bool absorbed = false;
  if (inst.has_field()) {
    run_inst = absorb_field(inst);
    absorbed = true;
  }

  SolveOptions opt = build_options(flags, run_inst.n);
  auto res = run_solver(run_inst, opt);

  SpinConfig spins = res.best.final_spins;
  if (absorbed) {
    if (spins[0] == -1)
      for (auto& s : spins) s = -s;
    spins.erase(spins.begin());
  }
  double final_energy = energy(inst, spins).energy;

  ordered_json doc;
  doc["schema_version"] = 1;
  doc["command"] = "solve";
  doc["instance"] = {{"name", inst.name}, {"n", inst.n}};
  doc["solver"] = opt.solver;
  doc["seed"] = opt.seed;
  doc["restarts"] = opt.restarts;
  doc["final_energy"] = final_energy;
  doc["final_spins"] = spins;
  if (!inst.has_field()) {
    double cut = cut_value(inst, spins);
    doc["final_cut"] = cut;
    std::cout << "energy " << final_energy << "  cut " << cut << "\n";
  } else {
    std::cout << "energy " << final_energy << "\n";
  }
  doc["best"] = record_to_json(res.best);
  doc["runs"] = runs_to_json(res.runs);

  if (!out_path.empty()) write_file(out_path, doc.dump(2) + "\n");
  if (!traj_path.empty()) write_file(traj_path, trajectory_csv(res.best));
  return kExitOk;
}

int cmd_bruteforce(const InstanceFlags& inst_flags, const std::string& out_path) {
  auto instances = inst_flags.load();
  if (instances.size() != 1) {
    std::cerr << "bruteforce: exactly one instance required\n";
    return kExitUsage;
  }
  const Instance& inst = instances[0].second;
  auto [spins, e] = brute_force_ground(inst);
  std::cout << "ground_energy " << e << "\nconfiguration";
  for (int s : spins) std::cout << ' ' << (s > 0 ? "+1" : "-1");
  std::cout << "\n";
  if (!out_path.empty()) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "bruteforce";
    doc["instance"] = {{"name", inst.name}, {"n", inst.n}};
    doc["ground_energy"] = e;
    doc["ground_spins"] = spins;
    write_file(out_path, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_regress(const std::string& data_path, int bits, int msb_power, bool msb_set,
                const SolverFlags& flags, const std::string& out_path) {
  if (bits < 1) {
    std::cerr << "regress: --bits must be at least 1\n";
    return kExitUsage;
  }
  RegressionProblem prob = regression_from_csv(read_file(data_path), bits);
  if (msb_set) prob.msb_power = msb_power;
  auto [inst, enc] = build_regression_instance(prob);

  SolveOptions opt = build_options(flags, inst.n);
  auto res = run_solver(inst, opt);
  auto w = decode_weights(enc, res.best.final_spins);
  double residual = regression_residual(prob, w);
  auto oracle = least_squares_oracle(prob);

  ordered_json doc;
  doc["schema_version"] = 1;
  doc["command"] = "regress";
  doc["bits"] = prob.bits;
  doc["msb_power"] = prob.msb_power;
  doc["solver"] = opt.solver;
  doc["seed"] = opt.seed;
  doc["w"] = w;
  doc["residual"] = residual;
  doc["oracle_w"] = oracle.w;
  doc["oracle_residual"] = oracle.residual;
  doc["final_energy"] = res.best.final_energy;
  doc["final_spins"] = res.best.final_spins;
  std::cout << "w";
  for (double v : w) std::cout << ' ' << v;
  std::cout << "  residual " << residual << "  oracle_residual " << oracle.residual << "\n";
  if (!out_path.empty()) write_file(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

struct BenchRow {
  std::string instance;
  std::string solver;
  std::uint64_t seed = 0;
  int restarts = 0;
  bool failed = false;
  std::string error;
  double best_energy = 0.0;
  double best_cut = 0.0;
  bool has_cut = false;
  double wall_time_s = 0.0;
};

int cmd_bench(const InstanceFlags& inst_flags, const SolverFlags& flags,
              const std::string& solvers_csv, const std::string& seeds_csv,
              const std::string& out_path, const std::string& format) {
  if (format != "csv" && format != "json") {
    std::cerr << "bench: --format must be csv or json\n";
    return kExitUsage;
  }
  auto instances = inst_flags.load();
  auto solvers = split_csv(solvers_csv);
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split_csv(seeds_csv)) seeds.push_back(std::stoull(s));
  if (seeds.empty()) seeds.push_back(flags.v.seed);

  if (instances.empty() || solvers.empty()) {
    std::cerr << "bench: need at least one instance and one solver\n";
    return kExitUsage;
  }
  for (const auto& s : solvers)
    if (!is_solver_tag(s)) {
      std::string tags;
      for (const auto& t : solver_tags()) tags += (tags.empty() ? "" : ", ") + t;
      std::cerr << "bench: unknown solver '" << s << "'; valid tags: " << tags << "\n";
      return kExitUsage;
    }

  // rows in deterministic sweep order: instances x solvers x seeds
  std::vector<BenchRow> rows;
  for (const auto& [name, inst] : instances)
    for (const auto& solver : solvers)
      for (std::uint64_t seed : seeds) {
        BenchRow row;
        row.instance = name;
        row.solver = solver;
        row.seed = seed;
        row.restarts = flags.v.restarts;
        rows.push_back(std::move(row));
      }

  auto run_row = [&](BenchRow& row) {
    try {
      const Instance* inst = nullptr;
      for (const auto& [name, candidate] : instances)
        if (name == row.instance) inst = &candidate;
      SolverFlags local = flags;
      local.v.solver = row.solver;
      local.v.seed = row.seed;
      SolveOptions opt = build_options(local, inst->n);
      auto t0 = std::chrono::steady_clock::now();
      auto res = run_solver(*inst, opt);
      row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.best_energy = res.best.final_energy;
      if (!inst->has_field()) {
        row.best_cut = cut_value(*inst, res.best.final_spins);
        row.has_cut = true;
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  };

  // embarrassingly parallel across rows; output keeps sweep order
  int workers = std::min<int>(thread_cap(), static_cast<int>(rows.size()));
  if (workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= rows.size()) return;
          run_row(rows[k]);
        }
      });
    for (auto& t : pool) t.join();
  } else {
    for (auto& row : rows) run_row(row);
  }

  std::size_t failures = 0;
  for (const auto& row : rows)
    if (row.failed) {
      ++failures;
      std::cerr << "bench: " << row.instance << '/' << row.solver << " seed " << row.seed
                << " failed: " << row.error << "\n";
    }

  // per-solver aggregates: mean energy/cut over successful rows, total time
  struct Aggregate {
    double e_mean = 0.0, c_mean = 0.0, t_sum = 0.0;
    std::size_t n_ok = 0, n_cut = 0;
  };
  std::vector<Aggregate> aggregates;
  for (const auto& solver : solvers) {
    Aggregate agg;
    double e_sum = 0.0, c_sum = 0.0;
    for (const auto& row : rows) {
      if (row.solver != solver) continue;
      agg.t_sum += row.wall_time_s;
      if (row.failed) continue;
      e_sum += row.best_energy;
      ++agg.n_ok;
      if (row.has_cut) {
        c_sum += row.best_cut;
        ++agg.n_cut;
      }
    }
    if (agg.n_ok) agg.e_mean = e_sum / static_cast<double>(agg.n_ok);
    if (agg.n_cut) agg.c_mean = c_sum / static_cast<double>(agg.n_cut);
    aggregates.push_back(agg);
  }

  std::string text;
  if (format == "csv") {
    std::ostringstream csv;
    csv << "# lagrising bench schema_version=1\n";
    csv << "instance,solver,seed,restarts,best_energy,best_cut,wall_time_s,status\n";
    char buf[64];
    auto fmt = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    for (const auto& row : rows) {
      csv << row.instance << ',' << row.solver << ',' << row.seed << ',' << row.restarts << ',';
      if (row.failed)
        csv << ",," << fmt(row.wall_time_s) << ",error\n";
      else
        csv << fmt(row.best_energy) << ',' << (row.has_cut ? fmt(row.best_cut) : "") << ','
            << fmt(row.wall_time_s) << ",ok\n";
    }
    for (std::size_t k = 0; k < solvers.size(); ++k) {
      const auto& agg = aggregates[k];
      csv << "(all)," << solvers[k] << ",,,";
      csv << (agg.n_ok ? fmt(agg.e_mean) : "") << ',';
      csv << (agg.n_cut ? fmt(agg.c_mean) : "") << ',';
      csv << fmt(agg.t_sum) << ",aggregate\n";
    }
    text = csv.str();
  } else {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["command"] = "bench";
    auto arr = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json r;
      r["instance"] = row.instance;
      r["solver"] = row.solver;
      r["seed"] = row.seed;
      r["restarts"] = row.restarts;
      r["status"] = row.failed ? "error" : "ok";
      if (row.failed) {
        r["error"] = row.error;
      } else {
        r["best_energy"] = row.best_energy;
        if (row.has_cut) r["best_cut"] = row.best_cut;
      }
      r["wall_time_s"] = row.wall_time_s;
      arr.push_back(std::move(r));
    }
    doc["rows"] = std::move(arr);
    auto aggs = ordered_json::array();
    for (std::size_t k = 0; k < solvers.size(); ++k) {
      ordered_json a;
      a["solver"] = solvers[k];
      a["rows_ok"] = aggregates[k].n_ok;
      if (aggregates[k].n_ok) a["mean_best_energy"] = aggregates[k].e_mean;
      if (aggregates[k].n_cut) a["mean_best_cut"] = aggregates[k].c_mean;
      a["wall_time_s"] = aggregates[k].t_sum;
      aggs.push_back(std::move(a));
    }
    doc["aggregates"] = std::move(aggs);
    text = doc.dump(2) + "\n";
  }

  if (!out_path.empty())
    write_file(out_path, text);
  else
    std::cout << text;

  if (failures == rows.size()) {
    std::cerr << "bench: every row failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"physics-inspired spin-optimization solver bench"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver on one instance");
  InstanceFlags solve_inst;
  solve_inst.attach(solve, false);
  SolverFlags solve_flags;
  solve_flags.attach(solve);
  std::string solve_out, solve_traj;
  solve->add_option("--out", solve_out, "result JSON path");
  solve->add_option("--trajectory", solve_traj, "trajectory CSV path");

  // bruteforce
  auto* brute = app.add_subcommand("bruteforce", "exhaustive ground state (n <= 24)");
  InstanceFlags brute_inst;
  brute_inst.attach(brute, false);
  std::string brute_out;
  brute->add_option("--json", brute_out, "result JSON path");

  // regress
  auto* regress = app.add_subcommand("regress", "least-squares fit through the spin machine");
  std::string regress_data, regress_out;
  int regress_bits = 0, regress_msb = 0;
  regress->add_option("--data", regress_data, "CSV file, last column is the target")->required();
  auto* bits_opt = regress->add_option("--bits", regress_bits, "signed binary digits per weight");
  bits_opt->required();
  auto* msb_opt = regress->add_option("--msb-power", regress_msb, "power of the leading digit");
  SolverFlags regress_flags;
  regress_flags.attach(regress);
  regress->add_option("--out", regress_out, "result JSON path");

  // bench
  auto* bench = app.add_subcommand("bench", "sweep solvers x instances x seeds");
  InstanceFlags bench_inst;
  bench_inst.attach(bench, true);
  SolverFlags bench_flags;
  bench_flags.attach(bench);
  std::string bench_solvers, bench_seeds, bench_out, bench_format = "csv";
  bench->add_option("--solvers", bench_solvers, "comma-separated solver tags");
  bench->add_option("--seeds", bench_seeds, "comma-separated seeds");
  bench->add_option("--out", bench_out, "output path (default stdout)");
  bench->add_option("--format", bench_format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      app.exit(e);
      return kExitOk;
    }
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) {
      solve_flags.apply_config();
      return cmd_solve(solve_inst, solve_flags, solve_out, solve_traj);
    }
    if (brute->parsed()) return cmd_bruteforce(brute_inst, brute_out);
    if (regress->parsed()) {
      regress_flags.apply_config();
      return cmd_regress(regress_data, regress_bits, regress_msb, msb_opt->count() > 0,
                         regress_flags, regress_out);
    }
    if (bench->parsed()) {
      bench_flags.apply_config();
      return cmd_bench(bench_inst, bench_flags, bench_solvers, bench_seeds, bench_out,
                       bench_format);
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
