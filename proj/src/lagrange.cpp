#include "lagrising/lagrange.hpp"

#include <cmath>
#include <memory>

#include "json.hpp"
#include "lagrising/errors.hpp"

namespace lagrising {

std::vector<double> fd_gradient(const ScalarFn& fn, std::span<const double> x, double step) {
  if (step <= 0.0) throw ArgumentError("fd_gradient: step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xi = probe[i];
    probe[i] = xi + step;
    double fp = fn(probe);
    probe[i] = xi - step;
    double fm = fn(probe);
    probe[i] = xi;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw DivergenceError("fd_gradient: non-finite evaluation", static_cast<long>(i));
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

LagrangeProblem ising_lagrange(const Instance& inst, std::vector<double> alpha,
                               double penalty_c) {
  const std::size_t n = inst.n;
  if (alpha.empty()) alpha.assign(n, 0.0);
  if (alpha.size() != n) throw DimensionError("ising_lagrange: alpha length mismatch");
  for (double a : alpha)
    if (a < 0.0) throw ArgumentError("ising_lagrange: alpha entries must be nonnegative");

  auto shared = std::make_shared<const Instance>(inst);
  auto loss = std::make_shared<const std::vector<double>>(std::move(alpha));

  LagrangeProblem prob;
  prob.dim = n;
  prob.penalty_c = penalty_c;
  prob.merit = [shared, loss, n](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += shared->J(i, j) * x[j];
      acc += x[i] * row + (*loss)[i] * x[i] * x[i];
    }
    return acc;
  };
  prob.merit_grad = [shared, loss, n](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += shared->J(i, j) * x[j];
      g[i] = 2.0 * row + 2.0 * (*loss)[i] * x[i];
    }
  };
  prob.constraints.reserve(n);
  prob.constraint_grads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    prob.constraints.push_back(
        [i](std::span<const double> x) { return 1.0 - x[i] * x[i]; });
    prob.constraint_grads.push_back([i](std::span<const double> x, std::span<double> g) {
      std::fill(g.begin(), g.end(), 0.0);
      g[i] = -2.0 * x[i];
    });
  }
  return prob;
}

std::vector<double> constraint_values(const LagrangeProblem& prob, std::span<const double> x) {
  std::vector<double> g(prob.constraints.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = prob.constraints[i](x);
  return g;
}

namespace {

void check_state(const LagrangeProblem& prob, const MultiplierState& st) {
  if (st.x.size() != prob.dim) throw DimensionError("state x length does not match problem");
  if (st.lambda.size() != prob.constraints.size())
    throw DimensionError("multiplier count does not match constraint count");
}

// gradient of fn at x: analytic when available, central differences otherwise
void eval_grad(const ScalarFn& fn, const GradFn& grad, std::span<const double> x,
               std::span<double> out) {
  if (grad) {
    grad(x, out);
    return;
  }
  auto g = fd_gradient(fn, x);
  std::copy(g.begin(), g.end(), out.begin());
}

}  // namespace

double lagrange_value(const LagrangeProblem& prob, const MultiplierState& st) {
  check_state(prob, st);
  double v = prob.merit(st.x);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i)
    v += st.lambda[i] * prob.constraints[i](st.x);
  return v;
}

double augmented_lagrange_value(const LagrangeProblem& prob, const MultiplierState& st) {
  check_state(prob, st);
  double v = prob.merit(st.x);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    double gi = prob.constraints[i](st.x);
    v += st.lambda[i] * gi + 0.5 * prob.penalty_c * gi * gi;
  }
  return v;
}

std::vector<double> augmented_lagrange_grad_x(const LagrangeProblem& prob,
                                              const MultiplierState& st) {
  check_state(prob, st);
  const std::size_t n = prob.dim;
  std::vector<double> grad(n, 0.0);
  eval_grad(prob.merit, prob.merit_grad, st.x, grad);

  std::vector<double> gg(n);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    double gi = prob.constraints[i](st.x);
    double coef = st.lambda[i] + prob.penalty_c * gi;
    if (coef == 0.0) continue;
    const GradFn& cg =
        i < prob.constraint_grads.size() ? prob.constraint_grads[i] : GradFn{};
    eval_grad(prob.constraints[i], cg, st.x, gg);
    for (std::size_t k = 0; k < n; ++k) grad[k] += coef * gg[k];
  }
  return grad;
}

MultiplierState descent_ascent_step(const LagrangeProblem& prob, const MultiplierState& st,
                                    double kappa, double kappa_p) {
  if (kappa <= 0.0 || kappa_p <= 0.0)
    throw ArgumentError("descent_ascent_step: step sizes must be positive");
  auto grad = augmented_lagrange_grad_x(prob, st);
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (!std::isfinite(grad[i]))
      throw DivergenceError("descent_ascent_step: non-finite gradient at component " +
                                std::to_string(i),
                            static_cast<long>(i));

  MultiplierState next = st;
  for (std::size_t i = 0; i < prob.dim; ++i) {
    next.x[i] = st.x[i] - kappa * grad[i];
    if (std::abs(next.x[i]) > kDivergenceBound)
      throw DivergenceError("descent_ascent_step: |x| exceeded divergence bound at component " +
                                std::to_string(i),
                            static_cast<long>(i));
  }
  for (std::size_t i = 0; i < prob.constraints.size(); ++i)
    next.lambda[i] = st.lambda[i] + kappa_p * prob.constraints[i](st.x);
  return next;
}

KktReport kkt_check(const LagrangeProblem& prob, const MultiplierState& st, double tol) {
  if (tol <= 0.0) throw ArgumentError("kkt_check: tolerance must be positive");
  check_state(prob, st);
  const std::size_t n = prob.dim;

  std::vector<double> grad(n, 0.0);
  eval_grad(prob.merit, prob.merit_grad, st.x, grad);
  std::vector<double> gg(n);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    if (st.lambda[i] == 0.0) continue;
    const GradFn& cg =
        i < prob.constraint_grads.size() ? prob.constraint_grads[i] : GradFn{};
    eval_grad(prob.constraints[i], cg, st.x, gg);
    for (std::size_t k = 0; k < n; ++k) grad[k] += st.lambda[i] * gg[k];
  }

  KktReport rep{0.0, 0.0, false};
  for (double g : grad) rep.stationarity = std::max(rep.stationarity, std::abs(g));
  for (const auto& c : prob.constraints)
    rep.feasibility = std::max(rep.feasibility, std::abs(c(st.x)));
  rep.pass = rep.stationarity <= tol && rep.feasibility <= tol;
  return rep;
}

std::string kkt_to_json(const KktReport& rep) {
  nlohmann::ordered_json doc;
  doc["stationarity"] = rep.stationarity;
  doc["feasibility"] = rep.feasibility;
  doc["pass"] = rep.pass;
  return doc.dump(2);
}

}  // namespace lagrising
