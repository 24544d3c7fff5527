#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lagrising/dynamics.hpp"
#include "lagrising/instance.hpp"
#include "lagrising/lagrange.hpp"
#include "lagrising/rng.hpp"

namespace lagrising {

enum class Method { euler, rk4 };

struct IntegratorConfig {
  Method method = Method::rk4;
  double dt = 0.01;
  long steps = 10000;
  long record_every = 100;
  double divergence_bound = 1e6;
  bool stop_on_plateau = false;     // stop after plateau_samples recorded samples
  double plateau_tol = 1e-12;       // with |delta L| below this
  long plateau_samples = 100;
};

struct GainSchedule {
  enum class Kind { constant, linear_ramp, adaptive };
  Kind kind = Kind::constant;
  double a = 0.0;          // intercept; initial gain for adaptive
  double b = 0.0;          // ramp slope (1/time)
  double gamma_max = std::numeric_limits<double>::infinity();
  double kappa_p = 0.01;   // ascent rate when adaptive
};

// constant -> a; linear_ramp -> min(a + b t, gamma_max). Adaptive schedules
// have no closed-form value; the gain is co-integrated as state instead.
double schedule_value(const GainSchedule& s, double t);

struct Sample {
  double t;
  double lagrange;   // paired merit of the running system
  double energy;     // instance energy of the rounded spins
  double max_amp;    // max |component| of the flattened state
  std::vector<double> state;
};

struct RunRecord {
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<Sample> samples;
  SpinConfig final_spins;
  double final_energy = 0.0;
  double wall_time_s = 0.0;
  long steps_run = 0;
};

// A flattened dynamical system the integrator can drive. Scratch state inside
// the closures belongs to exactly one trajectory; build one system per run.
struct SolverSystem {
  std::string tag;
  std::size_t dim = 0;
  std::function<void(double t, std::span<const double> y, std::span<double> dy)> rhs;
  std::function<void(double t)> begin_step;  // freezes scheduled gain for the step; may be null
  std::function<double(std::span<const double> y)> merit;
  std::function<SpinConfig(std::span<const double> y)> readout;
  std::function<double(std::span<const double> y)> rounded_energy;
  std::function<void(Rng& rng, std::span<double> y)> init;
};

// Fixed-step integration with per-config sampling; throws DivergenceError as
// soon as any state component leaves [-divergence_bound, divergence_bound].
RunRecord integrate(const SolverSystem& sys, std::vector<double> y0,
                    const IntegratorConfig& cfg);

// Continuous solver tags: opo, radio, fiber, phase, polariton, leleu, kerr.
// The instance must be field-free (absorb the field first).
SolverSystem make_system(const Instance& inst, const std::string& tag, const OscParams& params,
                         const GainSchedule& schedule);

struct SolveOptions {
  std::string solver = "opo";
  OscParams params;
  IntegratorConfig cfg;
  GainSchedule schedule;
  int restarts = 1;
  std::uint64_t seed = 1;
  double noise_sigma = 0.1;                                // soljacic
  double noise_decay = 0.0;                                // linear decay fraction over the run
  double soljacic_alpha = std::numeric_limits<double>::quiet_NaN();  // NaN -> auto
  double penalty_c = kDefaultPenalty;                      // lagrange
  double kappa = kDefaultKappa;                            // lagrange descent step
  double kappa_prime = kDefaultKappaPrime;                 // lagrange ascent step
};

struct RunSummary {
  std::uint64_t seed = 0;
  double final_energy = 0.0;
  bool diverged = false;
  std::string diagnostic;
  double wall_time_s = 0.0;
};

struct SolveResult {
  RunRecord best;
  std::vector<RunSummary> runs;
};

// Launches `restarts` independent trajectories with seeds seed+k and returns
// the record with minimum final energy (ties break toward the smaller seed).
// Diverged restarts land in the summaries; if every restart diverges the
// aggregate DivergenceError carries their diagnostics.
SolveResult run_solver(const Instance& inst, const SolveOptions& opt);

const std::vector<std::string>& solver_tags();
bool is_solver_tag(const std::string& tag);

std::string to_json(const RunRecord& rec);
std::string trajectory_csv(const RunRecord& rec);

}  // namespace lagrising
