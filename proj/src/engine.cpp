#include "lagrising/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "json.hpp"
#include "lagrising/errors.hpp"
#include "lagrising/iterators.hpp"

namespace lagrising {

double schedule_value(const GainSchedule& s, double t) {
  if (t < 0.0) throw ArgumentError("schedule_value: t must be nonnegative");
  switch (s.kind) {
    case GainSchedule::Kind::constant:
      return s.a;
    case GainSchedule::Kind::linear_ramp:
      return std::min(s.a + s.b * t, s.gamma_max);
    case GainSchedule::Kind::adaptive:
      throw ArgumentError("schedule_value: adaptive gain is state, not a function of t");
  }
  return s.a;
}

const std::vector<std::string>& solver_tags() {
  static const std::vector<std::string> tags = {"opo",  "radio",    "fiber", "phase",
                                                "polariton", "leleu", "kerr",  "matmul",
                                                "soljacic", "lagrange"};
  return tags;
}

bool is_solver_tag(const std::string& tag) {
  const auto& tags = solver_tags();
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs(std::span<const double> y) {
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  return peak;
}

// The published dynamics of some machines settle on maximizers of
// sum_ij J x_i x_j. Those solvers get the negated coupling matrix so that
// every tag minimizes the instance energy at readout; the RHS functions
// themselves keep their published signs. (kerr is not in the list: the
// conserved energy of its quadrature system already carries +J through the
// elastic coupling term, so its adiabatic minimum is the +J ground state.)
bool wants_negated_coupling(const std::string& tag) {
  return tag == "radio" || tag == "fiber" || tag == "phase" || tag == "leleu" ||
         tag == "soljacic";
}

Instance negated(const Instance& inst) {
  Instance out = inst;
  for (double& v : out.J.a) v = -v;
  return out;
}

void fill_noise(Rng& rng, std::span<double> y) {
  for (double& v : y) v = rng.uniform(-0.01, 0.01);
}

// shared, per-trajectory scratch for the continuous adapters
struct SystemScratch {
  Instance inst;      // coupling matrix as fed to the dynamics
  Instance report;    // original instance, used for energy readout
  OscParams p;
  GainSchedule sched;
  std::vector<Complex> e, de;  // polariton packing buffers
};

}  // namespace

RunRecord integrate(const SolverSystem& sys, std::vector<double> y0,
                    const IntegratorConfig& cfg) {
  if (cfg.dt <= 0.0) throw ArgumentError("integrate: dt must be positive");
  if (cfg.steps < 0) throw ArgumentError("integrate: steps must be nonnegative");
  if (cfg.record_every < 1) throw ArgumentError("integrate: record_every must be >= 1");
  if (y0.size() != sys.dim) throw DimensionError("integrate: state size mismatch");

  auto start = Clock::now();
  RunRecord rec;
  rec.solver = sys.tag;

  std::vector<double> y = std::move(y0);
  const std::size_t dim = sys.dim;
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  long plateau_run = 0;
  bool have_last = false;
  double last_merit = 0.0;

  auto record = [&](double t) {
    if (sys.begin_step) sys.begin_step(t);
    Sample s;
    s.t = t;
    s.lagrange = sys.merit ? sys.merit(y) : 0.0;
    s.energy = sys.rounded_energy ? sys.rounded_energy(y) : 0.0;
    s.max_amp = max_abs(y);
    s.state = y;
    rec.samples.push_back(std::move(s));
    if (have_last && std::abs(rec.samples.back().lagrange - last_merit) < cfg.plateau_tol)
      ++plateau_run;
    else
      plateau_run = 0;
    last_merit = rec.samples.back().lagrange;
    have_last = true;
  };

  record(0.0);

  long step = 0;
  for (; step < cfg.steps; ++step) {
    double t = static_cast<double>(step) * cfg.dt;
    if (sys.begin_step) sys.begin_step(t);

    if (cfg.method == Method::euler) {
      sys.rhs(t, y, k1);
      for (std::size_t i = 0; i < dim; ++i) y[i] += cfg.dt * k1[i];
    } else {
      const double half = cfg.dt / 2.0;
      sys.rhs(t, y, k1);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + half * k1[i];
      sys.rhs(t + half, tmp, k2);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + half * k2[i];
      sys.rhs(t + half, tmp, k3);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + cfg.dt * k3[i];
      sys.rhs(t + cfg.dt, tmp, k4);
      for (std::size_t i = 0; i < dim; ++i)
        y[i] += cfg.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    for (std::size_t i = 0; i < dim; ++i)
      if (!std::isfinite(y[i]) || std::abs(y[i]) > cfg.divergence_bound)
        throw DivergenceError("trajectory diverged: |y[" + std::to_string(i) +
                                  "]| exceeded bound at step " + std::to_string(step),
                              static_cast<long>(i), step);

    if ((step + 1) % cfg.record_every == 0 || step + 1 == cfg.steps) {
      record(static_cast<double>(step + 1) * cfg.dt);
      if (cfg.stop_on_plateau && plateau_run >= cfg.plateau_samples) {
        ++step;
        break;
      }
    }
  }

  rec.steps_run = step;
  rec.final_spins = sys.readout(y);
  rec.final_energy = sys.rounded_energy(y);
  rec.wall_time_s = seconds_since(start);
  return rec;
}

SolverSystem make_system(const Instance& inst, const std::string& tag, const OscParams& params,
                         const GainSchedule& schedule) {
  if (inst.has_field())
    throw UnsupportedError("make_system: solvers are field-free; call absorb_field first");

  auto sh = std::make_shared<SystemScratch>();
  sh->inst = wants_negated_coupling(tag) ? negated(inst) : inst;
  sh->report = inst;
  sh->p = params;
  sh->sched = schedule;
  const std::size_t n = inst.n;
  const bool adaptive = schedule.kind == GainSchedule::Kind::adaptive;

  SolverSystem sys;
  sys.tag = tag;

  auto scheduled_gain = [sh](double t) { sh->p.gamma.assign(1, schedule_value(sh->sched, t)); };
  auto gain_from_state = [sh, n](std::span<const double> y, std::size_t offset) {
    sh->p.gamma.assign(y.begin() + offset, y.begin() + offset + n);
  };
  auto report_energy = [sh](const SpinConfig& s) { return energy(sh->report, s).energy; };

  if (tag == "opo" || tag == "radio" || tag == "fiber") {
    void (*rhs_fn)(const Instance&, const OscParams&, std::span<const double>,
                   std::span<double>) = tag == "opo" ? opo_rhs
                                        : tag == "radio" ? radio_rhs
                                                         : fiber_rhs;
    double (*merit_fn)(const Instance&, const OscParams&, std::span<const double>) =
        tag == "opo" ? opo_lagrange : tag == "radio" ? radio_lagrange : fiber_lagrange;

    sys.dim = adaptive ? 2 * n : n;
    if (adaptive) {
      double kp = schedule.kappa_p;
      sys.rhs = [sh, n, kp, rhs_fn, gain_from_state](double, std::span<const double> y,
                                                     std::span<double> dy) {
        gain_from_state(y, n);
        rhs_fn(sh->inst, sh->p, y.subspan(0, n), dy.subspan(0, n));
        multiplier_feedback_rhs(y.subspan(0, n), kp, dy.subspan(n, n));
      };
      sys.merit = [sh, n, merit_fn, gain_from_state](std::span<const double> y) {
        gain_from_state(y, n);
        return merit_fn(sh->inst, sh->p, y.subspan(0, n));
      };
    } else {
      sys.begin_step = scheduled_gain;
      sys.rhs = [sh, n, rhs_fn](double, std::span<const double> y, std::span<double> dy) {
        rhs_fn(sh->inst, sh->p, y.subspan(0, n), dy.subspan(0, n));
      };
      sys.merit = [sh, n, merit_fn](std::span<const double> y) {
        return merit_fn(sh->inst, sh->p, y.subspan(0, n));
      };
    }
    sys.readout = [n](std::span<const double> y) { return round_to_spins(y.subspan(0, n)); };
    double a0 = schedule.a;
    sys.init = [n, adaptive, a0](Rng& rng, std::span<double> y) {
      fill_noise(rng, y.subspan(0, n));
      if (adaptive)
        for (std::size_t i = 0; i < n; ++i) y[n + i] = a0;
    };
  } else if (tag == "phase") {
    if (adaptive) throw ArgumentError("make_system: adaptive gain is not supported for phase");
    sys.dim = n;
    sys.begin_step = scheduled_gain;
    sys.rhs = [sh](double, std::span<const double> y, std::span<double> dy) {
      phase_rhs(sh->inst, sh->p, y, dy);
    };
    sys.merit = [sh](std::span<const double> y) { return phase_lagrange(sh->inst, sh->p, y); };
    sys.readout = [](std::span<const double> y) { return round_phases_to_spins(y); };
    sys.init = [](Rng& rng, std::span<double> y) { fill_noise(rng, y); };
  } else if (tag == "polariton") {
    sys.dim = adaptive ? 3 * n : 2 * n;
    sh->e.resize(n);
    sh->de.resize(n);
    auto pack = [sh, n](std::span<const double> y) {
      for (std::size_t i = 0; i < n; ++i) sh->e[i] = Complex(y[i], y[n + i]);
    };
    if (adaptive) {
      double kp = schedule.kappa_p;
      sys.rhs = [sh, n, kp, pack, gain_from_state](double, std::span<const double> y,
                                                   std::span<double> dy) {
        pack(y);
        gain_from_state(y, 2 * n);
        polariton_rhs(sh->inst, sh->p, sh->e, sh->de);
        for (std::size_t i = 0; i < n; ++i) {
          dy[i] = sh->de[i].real();
          dy[n + i] = sh->de[i].imag();
        }
        multiplier_feedback_rhs(std::span<const Complex>(sh->e), kp, dy.subspan(2 * n, n));
      };
      sys.merit = [sh, n, pack, gain_from_state](std::span<const double> y) {
        pack(y);
        gain_from_state(y, 2 * n);
        return polariton_lagrange(sh->inst, sh->p, sh->e);
      };
    } else {
      sys.begin_step = scheduled_gain;
      sys.rhs = [sh, n, pack](double, std::span<const double> y, std::span<double> dy) {
        pack(y);
        polariton_rhs(sh->inst, sh->p, sh->e, sh->de);
        for (std::size_t i = 0; i < n; ++i) {
          dy[i] = sh->de[i].real();
          dy[n + i] = sh->de[i].imag();
        }
      };
      sys.merit = [sh, n, pack](std::span<const double> y) {
        pack(y);
        return polariton_lagrange(sh->inst, sh->p, sh->e);
      };
    }
    sys.readout = [n](std::span<const double> y) { return round_to_spins(y.subspan(0, n)); };
    double a0 = schedule.a;
    sys.init = [n, adaptive, a0](Rng& rng, std::span<double> y) {
      fill_noise(rng, y.subspan(0, 2 * n));
      if (adaptive)
        for (std::size_t i = 0; i < n; ++i) y[2 * n + i] = a0;
    };
  } else if (tag == "leleu") {
    if (adaptive)
      throw ArgumentError("make_system: leleu carries its own error dynamics; adaptive gain unsupported");
    sys.dim = 2 * n;
    sys.begin_step = scheduled_gain;
    sys.rhs = [sh, n](double, std::span<const double> y, std::span<double> dy) {
      leleu_rhs(sh->inst, sh->p, y.subspan(0, n), y.subspan(n, n), dy.subspan(0, n),
                dy.subspan(n, n));
    };
    sys.merit = [sh, n](std::span<const double> y) {
      return quadratic_merit(sh->inst, y.subspan(0, n));
    };
    sys.readout = [n](std::span<const double> y) { return round_to_spins(y.subspan(0, n)); };
    sys.init = [n](Rng& rng, std::span<double> y) {
      fill_noise(rng, y.subspan(0, n));
      for (std::size_t i = 0; i < n; ++i) y[n + i] = 1.0;
    };
  } else if (tag == "kerr") {
    if (adaptive) throw ArgumentError("make_system: adaptive gain is not supported for kerr");
    sys.dim = 2 * n;
    // the schedule drives the parametric pump here
    sys.begin_step = [sh](double t) { sh->p.pump_p = schedule_value(sh->sched, t); };
    sys.rhs = [sh, n](double, std::span<const double> y, std::span<double> dy) {
      kerr_rhs(sh->inst, sh->p, y.subspan(0, n), y.subspan(n, n), dy.subspan(0, n),
               dy.subspan(n, n));
    };
    sys.merit = [sh, n](std::span<const double> y) {
      return quadratic_merit(sh->inst, y.subspan(0, n));
    };
    sys.readout = [n](std::span<const double> y) { return round_to_spins(y.subspan(0, n)); };
    sys.init = [n](Rng& rng, std::span<double> y) { fill_noise(rng, y.subspan(0, 2 * n)); };
  } else {
    throw ArgumentError("make_system: unknown continuous solver '" + tag + "'");
  }

  sys.rounded_energy = [sys_readout = sys.readout, report_energy](std::span<const double> y) {
    return report_energy(sys_readout(y));
  };
  return sys;
}

namespace {

RunRecord run_continuous(const Instance& inst, const SolveOptions& opt, std::uint64_t seed) {
  SolverSystem sys = make_system(inst, opt.solver, opt.params, opt.schedule);
  Rng rng(seed);
  std::vector<double> y0(sys.dim, 0.0);
  sys.init(rng, y0);
  RunRecord rec = integrate(sys, std::move(y0), opt.cfg);
  rec.seed = seed;
  return rec;
}

RunRecord run_matmul(const Instance& inst, const SolveOptions& opt, std::uint64_t seed) {
  auto start = Clock::now();
  const std::size_t n = inst.n;
  Rng rng(seed);
  std::vector<double> e(n);
  fill_noise(rng, e);

  RunRecord rec;
  rec.solver = opt.solver;
  rec.seed = seed;

  const bool ramped = opt.schedule.kind == GainSchedule::Kind::linear_ramp;
  if (opt.schedule.kind == GainSchedule::Kind::adaptive)
    throw ArgumentError("matmul: adaptive gain is not supported");
  double gamma = schedule_value(opt.schedule, 0.0);
  IterationMatrix m = build_matmul_matrix(inst, std::span<const double>(&gamma, 1), opt.cfg.dt);

  auto record = [&](long step, double g) {
    Sample s;
    s.t = static_cast<double>(step);
    // merit of the underlying constrained objective at the current gain
    double quad = quadratic_merit(inst, e);
    double pen = 0.0;
    for (double v : e) pen += v * v - 1.0;
    s.lagrange = quad - g * pen;
    s.energy = energy(inst, round_to_spins(std::span<const double>(e))).energy;
    s.max_amp = max_abs(e);
    s.state = e;
    rec.samples.push_back(std::move(s));
  };
  record(0, gamma);

  for (long step = 0; step < opt.cfg.steps; ++step) {
    if (ramped) {
      gamma = schedule_value(opt.schedule, static_cast<double>(step) * opt.cfg.dt);
      m = build_matmul_matrix(inst, std::span<const double>(&gamma, 1), opt.cfg.dt);
    }
    e = matmul_iterate(m, std::move(e), 1, true);
    if ((step + 1) % opt.cfg.record_every == 0 || step + 1 == opt.cfg.steps)
      record(step + 1, gamma);
  }

  rec.steps_run = opt.cfg.steps;
  rec.final_spins = round_to_spins(std::span<const double>(e));
  rec.final_energy = energy(inst, rec.final_spins).energy;
  rec.wall_time_s = seconds_since(start);
  return rec;
}

RunRecord run_soljacic(const Instance& inst, const SolveOptions& opt, std::uint64_t seed) {
  auto start = Clock::now();
  Instance work = negated(inst);
  double alpha = std::isnan(opt.soljacic_alpha) ? default_soljacic_alpha(work)
                                                : opt.soljacic_alpha;
  IterationMatrix k = build_soljacic_matrix(work, alpha);

  Rng rng(seed);
  BinaryState e(inst.n);
  for (auto& b : e) b = rng.bernoulli(0.5) ? 1 : 0;

  RunRecord rec;
  rec.solver = opt.solver;
  rec.seed = seed;

  auto record = [&](long step) {
    Sample s;
    s.t = static_cast<double>(step);
    s.lagrange = soljacic_merit(k, e);
    auto spins = binary_to_spins(e);
    s.energy = energy(inst, spins).energy;
    s.max_amp = 1.0;
    s.state.assign(e.begin(), e.end());
    rec.samples.push_back(std::move(s));
  };
  record(0);

  long done = 0;
  while (done < opt.cfg.steps) {
    long chunk = std::min(opt.cfg.record_every, opt.cfg.steps - done);
    // optional linear decay of the noise level over the run
    double frac = static_cast<double>(done) / static_cast<double>(opt.cfg.steps);
    double sigma = opt.noise_sigma * std::max(0.0, 1.0 - opt.noise_decay * frac);
    e = soljacic_iterate(k, std::move(e), sigma, rng, chunk);
    done += chunk;
    record(done);
  }

  rec.steps_run = opt.cfg.steps;
  rec.final_spins = binary_to_spins(e);
  rec.final_energy = energy(inst, rec.final_spins).energy;
  rec.wall_time_s = seconds_since(start);
  return rec;
}

RunRecord run_lagrange(const Instance& inst, const SolveOptions& opt, std::uint64_t seed) {
  auto start = Clock::now();
  const std::size_t n = inst.n;
  std::vector<double> alpha(n, alpha_at(opt.params, 0));
  if (opt.params.alpha.size() == n) alpha = opt.params.alpha;
  LagrangeProblem prob = ising_lagrange(inst, alpha, opt.penalty_c);

  Rng rng(seed);
  MultiplierState st;
  st.x.resize(n);
  fill_noise(rng, st.x);
  st.lambda.assign(n, 0.0);

  RunRecord rec;
  rec.solver = opt.solver;
  rec.seed = seed;

  auto record = [&](long step) {
    Sample s;
    s.t = static_cast<double>(step);
    s.lagrange = augmented_lagrange_value(prob, st);
    s.energy = energy(inst, round_to_spins(std::span<const double>(st.x))).energy;
    s.max_amp = max_abs(st.x);
    s.state = st.x;
    rec.samples.push_back(std::move(s));
  };
  record(0);

  for (long step = 0; step < opt.cfg.steps; ++step) {
    st = descent_ascent_step(prob, st, opt.kappa, opt.kappa_prime);
    if ((step + 1) % opt.cfg.record_every == 0 || step + 1 == opt.cfg.steps) record(step + 1);
  }

  rec.steps_run = opt.cfg.steps;
  rec.final_spins = round_to_spins(std::span<const double>(st.x));
  rec.final_energy = energy(inst, rec.final_spins).energy;
  rec.wall_time_s = seconds_since(start);
  return rec;
}

}  // namespace

SolveResult run_solver(const Instance& inst, const SolveOptions& opt) {
  if (!is_solver_tag(opt.solver))
    throw ArgumentError("run_solver: unknown solver '" + opt.solver + "'");
  if (opt.restarts < 1) throw ArgumentError("run_solver: restarts must be >= 1");
  if (inst.has_field())
    throw UnsupportedError("run_solver: solvers are field-free; call absorb_field first");

  SolveResult result;
  bool have_best = false;
  std::string diagnostics;

  for (int k = 0; k < opt.restarts; ++k) {
    std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(k);
    RunSummary summary;
    summary.seed = seed;
    try {
      RunRecord rec;
      if (opt.solver == "matmul")
        rec = run_matmul(inst, opt, seed);
      else if (opt.solver == "soljacic")
        rec = run_soljacic(inst, opt, seed);
      else if (opt.solver == "lagrange")
        rec = run_lagrange(inst, opt, seed);
      else
        rec = run_continuous(inst, opt, seed);

      summary.final_energy = rec.final_energy;
      summary.wall_time_s = rec.wall_time_s;
      if (!have_best || rec.final_energy < result.best.final_energy) {
        result.best = std::move(rec);
        have_best = true;
      }
    } catch (const DivergenceError& e) {
      summary.diverged = true;
      summary.diagnostic = e.what();
      diagnostics += std::string(diagnostics.empty() ? "" : "; ") + "seed " +
                     std::to_string(seed) + ": " + e.what();
    }
    result.runs.push_back(std::move(summary));
  }

  if (!have_best)
    throw DivergenceError("run_solver: all " + std::to_string(opt.restarts) +
                          " restarts diverged (" + diagnostics + ")");
  return result;
}

std::string to_json(const RunRecord& rec) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["solver"] = rec.solver;
  doc["seed"] = rec.seed;
  doc["steps_run"] = rec.steps_run;
  doc["final_energy"] = rec.final_energy;
  doc["final_spins"] = rec.final_spins;
  doc["wall_time_s"] = rec.wall_time_s;
  auto samples = nlohmann::ordered_json::array();
  for (const auto& s : rec.samples) {
    nlohmann::ordered_json row;
    row["t"] = s.t;
    row["lagrange"] = s.lagrange;
    row["energy"] = s.energy;
    row["max_amp"] = s.max_amp;
    row["state"] = s.state;
    samples.push_back(std::move(row));
  }
  doc["samples"] = std::move(samples);
  return doc.dump(2);
}

std::string trajectory_csv(const RunRecord& rec) {
  std::string out = "# lagrising trajectory schema_version=1\nt,lagrange,energy,max_amp\n";
  char buf[160];
  for (const auto& s : rec.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", s.t, s.lagrange, s.energy,
                  s.max_amp);
    out += buf;
  }
  return out;
}

}  // namespace lagrising
