#include "lagrising/dynamics.hpp"

#include <cmath>

#include "lagrising/errors.hpp"

namespace lagrising {

OscParams OscParams::radio_circuit(double r_c, double c_0, std::size_t n) {
  OscParams p;
  p.r_c = r_c;
  p.c_0 = c_0;
  p.coupling_scale = 1.0 / (4.0 * r_c * c_0);
  p.alpha = {static_cast<double>(n - 1) / (4.0 * r_c * c_0)};
  return p;
}

namespace {

void check_broadcast(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != 1 && v.size() != n)
    throw DimensionError(std::string(what) + ": expected 1 or n entries");
}

void check_finite(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw DivergenceError(std::string(what) + ": non-finite input state",
                            static_cast<long>(i));
}

void check_finite(std::span<const Complex> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()))
      throw DivergenceError(std::string(what) + ": non-finite input state",
                            static_cast<long>(i));
}

void check_params(const Instance& inst, const OscParams& p, std::size_t state_n,
                  const char* what) {
  if (state_n != inst.n) throw DimensionError(std::string(what) + ": state length != n");
  check_broadcast(p.alpha, inst.n, what);
  check_broadcast(p.gamma, inst.n, what);
}

}  // namespace

double alpha_at(const OscParams& p, std::size_t i) {
  return p.alpha.size() == 1 ? p.alpha[0] : p.alpha[i];
}

double gamma_at(const OscParams& p, std::size_t i) {
  return p.gamma.size() == 1 ? p.gamma[0] : p.gamma[i];
}

void opo_rhs(const Instance& inst, const OscParams& p, std::span<const double> c,
             std::span<double> dc) {
  check_params(inst, p, c.size(), "opo_rhs");
  check_finite(c, "opo_rhs");
  if (p.beta_sat < 0.0) throw ArgumentError("opo_rhs: beta_sat must be nonnegative");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    double coup = 0.0;
    for (std::size_t j = 0; j < n; ++j) coup += inst.J(i, j) * c[j];
    dc[i] = (-alpha_at(p, i) + gamma_at(p, i)) * c[i] - coup - p.beta_sat * c[i] * c[i] * c[i];
  }
}

void radio_rhs(const Instance& inst, const OscParams& p, std::span<const double> c,
               std::span<double> dc) {
  check_params(inst, p, c.size(), "radio_rhs");
  check_finite(c, "radio_rhs");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    double coup = 0.0;
    for (std::size_t j = 0; j < n; ++j) coup += inst.J(i, j) * c[j];
    dc[i] = p.coupling_scale * coup - alpha_at(p, i) * c[i] + gamma_at(p, i) * c[i];
  }
}

void fiber_rhs(const Instance& inst, const OscParams& p, std::span<const double> mu,
               std::span<double> dmu) {
  check_params(inst, p, mu.size(), "fiber_rhs");
  check_finite(mu, "fiber_rhs");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    double coup = 0.0;
    for (std::size_t j = 0; j < n; ++j) coup += inst.J(i, j) * mu[j];
    dmu[i] = (-alpha_at(p, i) + gamma_at(p, i)) * mu[i] + coup;
  }
}

void phase_rhs(const Instance& inst, const OscParams& p, std::span<const double> phi,
               std::span<double> dphi) {
  check_params(inst, p, phi.size(), "phase_rhs");
  check_finite(phi, "phase_rhs");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    double coup = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      coup += inst.J(i, j) * std::sin(phi[i] - phi[j]);
    dphi[i] = -p.coupling_scale * coup - gamma_at(p, i) * std::sin(2.0 * phi[i]);
  }
}

void polariton_rhs(const Instance& inst, const OscParams& p, std::span<const Complex> e,
                   std::span<Complex> de) {
  check_params(inst, p, e.size(), "polariton_rhs");
  check_finite(e, "polariton_rhs");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    Complex coup{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) coup += inst.J(i, j) * e[j];
    double a2 = std::norm(e[i]);
    de[i] = (gamma_at(p, i) - p.beta_sat * a2) * e[i] -
            Complex(0.0, 1.0) * (p.u_rot * a2) * e[i] - coup;
  }
}

void multiplier_feedback_rhs(std::span<const double> x, double kappa_p,
                             std::span<double> dgamma) {
  if (kappa_p <= 0.0) throw ArgumentError("multiplier_feedback_rhs: kappa_p must be positive");
  for (std::size_t i = 0; i < x.size(); ++i) dgamma[i] = kappa_p * (1.0 - x[i] * x[i]);
}

void multiplier_feedback_rhs(std::span<const Complex> e, double kappa_p,
                             std::span<double> dgamma) {
  if (kappa_p <= 0.0) throw ArgumentError("multiplier_feedback_rhs: kappa_p must be positive");
  for (std::size_t i = 0; i < e.size(); ++i) dgamma[i] = kappa_p * (1.0 - std::norm(e[i]));
}

void leleu_rhs(const Instance& inst, const OscParams& p, std::span<const double> x,
               std::span<const double> err, std::span<double> dx, std::span<double> derr) {
  check_params(inst, p, x.size(), "leleu_rhs");
  if (err.size() != x.size()) throw DimensionError("leleu_rhs: error vector missing or mis-sized");
  check_finite(x, "leleu_rhs");
  check_finite(err, "leleu_rhs");
  if (p.beta_leleu < 0.0) throw ArgumentError("leleu_rhs: beta_leleu must be nonnegative");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    double coup = 0.0;
    for (std::size_t j = 0; j < n; ++j) coup += inst.J(i, j) * x[j];
    dx[i] = (-alpha_at(p, i) + gamma_at(p, i)) * x[i] + err[i] * coup;
    derr[i] = p.beta_leleu * (1.0 - x[i] * x[i]) * err[i];
  }
}

void kerr_rhs(const Instance& inst, const OscParams& p, std::span<const double> c,
              std::span<const double> s, std::span<double> dc, std::span<double> ds) {
  if (c.size() != inst.n || s.size() != inst.n)
    throw DimensionError("kerr_rhs: need both quadratures of length n");
  check_finite(c, "kerr_rhs");
  check_finite(s, "kerr_rhs");
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    double coup_s = 0.0, coup_c = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      coup_s += inst.J(i, j) * s[j];
      coup_c += inst.J(i, j) * c[j];
    }
    double r2 = c[i] * c[i] + s[i] * s[i];
    dc[i] = p.kerr_k * r2 * s[i] + p.pump_p * s[i] + p.xi0 * coup_s;
    ds[i] = -p.kerr_k * r2 * c[i] + p.pump_p * c[i] - p.xi0 * coup_c;
  }
}

double quadratic_merit(const Instance& inst, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < inst.n; ++j) row += inst.J(i, j) * x[j];
    acc += x[i] * row;
  }
  return acc;
}

double opo_power(const Instance& inst, const OscParams& p, std::span<const double> c) {
  double acc = quadratic_merit(inst, c);
  for (std::size_t i = 0; i < inst.n; ++i)
    acc += (alpha_at(p, i) - gamma_at(p, i)) * c[i] * c[i];
  return acc;
}

double opo_lagrange(const Instance& inst, const OscParams& p, std::span<const double> c) {
  double acc = quadratic_merit(inst, c);
  for (std::size_t i = 0; i < inst.n; ++i) {
    acc += alpha_at(p, i) * c[i] * c[i];
    acc -= gamma_at(p, i) * (c[i] * c[i] - 1.0);
  }
  return acc;
}

double radio_lagrange(const Instance& inst, const OscParams& p, std::span<const double> c) {
  double acc = -quadratic_merit(inst, c) / (4.0 * p.r_c);
  for (std::size_t i = 0; i < inst.n; ++i) {
    acc += alpha_at(p, i) * p.c_0 * c[i] * c[i];
    acc -= gamma_at(p, i) * p.c_0 * (c[i] * c[i] - 1.0);
  }
  return acc;
}

double fiber_lagrange(const Instance& inst, const OscParams& p, std::span<const double> mu) {
  double acc = -quadratic_merit(inst, mu);
  for (std::size_t i = 0; i < inst.n; ++i) {
    acc += alpha_at(p, i) * mu[i] * mu[i];
    acc -= gamma_at(p, i) * (mu[i] * mu[i] - 1.0);
  }
  return acc;
}

double phase_lagrange(const Instance& inst, const OscParams& p, std::span<const double> phi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inst.n; ++j)
      acc += inst.J(i, j) * std::cos(phi[i] - phi[j]);
  acc *= -p.coupling_scale;
  for (std::size_t i = 0; i < inst.n; ++i)
    acc -= gamma_at(p, i) * (std::cos(2.0 * phi[i]) - 1.0);
  return acc;
}

double polariton_lagrange(const Instance& inst, const OscParams& p,
                          std::span<const Complex> e) {
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    Complex row{0.0, 0.0};
    for (std::size_t j = 0; j < inst.n; ++j) row += inst.J(i, j) * e[j];
    acc += e[i].real() * row.real() + e[i].imag() * row.imag();
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    double a2 = std::norm(e[i]);
    acc += 0.5 * p.beta_sat * a2 * a2;
    acc -= gamma_at(p, i) * (a2 - 1.0);
  }
  return acc;
}

}  // namespace lagrising
