#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lagrising/instance.hpp"

namespace lagrising {

using ScalarFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

inline constexpr double kDefaultKappa = 0.05;        // descent step
inline constexpr double kDefaultKappaPrime = 0.005;  // ascent step, slow relative to descent
inline constexpr double kDefaultPenalty = 1.0;
inline constexpr double kDefaultFdStep = 1e-6;
inline constexpr double kDivergenceBound = 1e6;

// Merit f plus equality constraints g_i = 0, optionally augmented with
// (c/2) sum g_i^2. Analytic gradients are optional; central differences
// fill in when they are missing.
struct LagrangeProblem {
  std::size_t dim = 0;
  ScalarFn merit;
  GradFn merit_grad;                       // may be null
  std::vector<ScalarFn> constraints;
  std::vector<GradFn> constraint_grads;    // empty, or one per constraint (null entries allowed)
  double penalty_c = kDefaultPenalty;
};

struct MultiplierState {
  std::vector<double> x;
  std::vector<double> lambda;
};

struct KktReport {
  double stationarity;  // max-norm of grad_x L(x, lambda)
  double feasibility;   // max_i |g_i(x)|
  bool pass;
};

// Central differences, component i: (fn(x + step e_i) - fn(x - step e_i)) / (2 step).
std::vector<double> fd_gradient(const ScalarFn& fn, std::span<const double> x,
                                double step = kDefaultFdStep);

// The spin problem as a constrained program:
//   f(x) = sum_{i,j} J_ij x_i x_j + sum_i alpha_i x_i^2,   g_i(x) = 1 - x_i^2.
// alpha models per-variable loss; pass an empty vector for zero loss.
LagrangeProblem ising_lagrange(const Instance& inst, std::vector<double> alpha,
                               double penalty_c = kDefaultPenalty);

double lagrange_value(const LagrangeProblem& prob, const MultiplierState& st);
double augmented_lagrange_value(const LagrangeProblem& prob, const MultiplierState& st);

std::vector<double> constraint_values(const LagrangeProblem& prob, std::span<const double> x);
std::vector<double> augmented_lagrange_grad_x(const LagrangeProblem& prob,
                                              const MultiplierState& st);

// One simultaneous update: gradient descent of the augmented Lagrangian in x,
// gradient ascent in lambda (d L / d lambda_i = g_i). Both sides read the
// incoming state.
MultiplierState descent_ascent_step(const LagrangeProblem& prob, const MultiplierState& st,
                                    double kappa, double kappa_p);

// First-order + feasibility residuals of the plain Lagrangian (equality
// constraints only; no second-order check).
KktReport kkt_check(const LagrangeProblem& prob, const MultiplierState& st, double tol);

std::string kkt_to_json(const KktReport& rep);

}  // namespace lagrising
