#include "lagrising/iterators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagrising/errors.hpp"

namespace lagrising {

IterationMatrix build_matmul_matrix(const Instance& inst, std::span<const double> gamma,
                                    double kappa_dt) {
  if (kappa_dt < 0.0) throw ArgumentError("build_matmul_matrix: kappa_dt must be nonnegative");
  if (gamma.size() != 1 && gamma.size() != inst.n)
    throw DimensionError("build_matmul_matrix: gamma length mismatch");
  const std::size_t n = inst.n;
  IterationMatrix m;
  m.kind = IterationMatrix::Kind::matmul;
  m.kappa_dt = kappa_dt;
  m.A = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double gi = gamma.size() == 1 ? gamma[0] : gamma[i];
    for (std::size_t j = 0; j < n; ++j)
      m.A(i, j) = (i == j ? 1.0 + 2.0 * kappa_dt * gi : 0.0) - 2.0 * kappa_dt * inst.J(i, j);
  }
  return m;
}

std::vector<double> matmul_iterate(const IterationMatrix& m, std::vector<double> e,
                                   long steps, bool normalize) {
  if (steps < 0) throw ArgumentError("matmul_iterate: steps must be nonnegative");
  if (e.size() != m.A.rows) throw DimensionError("matmul_iterate: vector length mismatch");
  for (long step = 0; step < steps; ++step) {
    e = matvec(m.A, e);
    double peak = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!std::isfinite(e[i]))
        throw DivergenceError("matmul_iterate: non-finite value", static_cast<long>(i), step);
      peak = std::max(peak, std::abs(e[i]));
    }
    if (normalize) {
      if (peak > 0.0)
        for (double& v : e) v /= peak;
    } else if (peak > 1e100) {
      throw DivergenceError("matmul_iterate: overflow without normalization", -1, step);
    }
  }
  return e;
}

double default_soljacic_alpha(const Instance& inst) {
  auto eig = jacobi_eigen(inst.J, 1e-10);
  return std::max(0.0, -eig.values.front()) + 0.1;
}

IterationMatrix build_soljacic_matrix(const Instance& inst, double alpha,
                                      const Mat* m_choice) {
  const std::size_t n = inst.n;
  Mat shifted = inst.J;
  if (m_choice) {
    if (m_choice->rows != n || m_choice->cols != n)
      throw DimensionError("build_soljacic_matrix: M size mismatch");
    for (std::size_t i = 0; i < n * n; ++i) shifted.a[i] += alpha * m_choice->a[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += alpha;
  }

  auto eig = jacobi_eigen(shifted, 1e-10);
  double min_eig = eig.values.front();
  if (min_eig < -1e-10) {
    // smallest alpha that lifts the spectrum to PSD, assuming M = I
    double admissible = alpha - min_eig;
    throw NotPsdError("build_soljacic_matrix: J + alpha M has eigenvalue " +
                          std::to_string(min_eig) + "; smallest admissible alpha is " +
                          std::to_string(admissible),
                      min_eig, admissible);
  }

  IterationMatrix m;
  m.kind = IterationMatrix::Kind::soljacic;
  m.alpha_shift = alpha;
  m.A = Mat(n, n);
  // K = V sqrt(L) V^T with eigenvalues clipped at zero
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.vectors(i, k) * std::sqrt(std::max(0.0, eig.values[k])) * eig.vectors(j, k);
      m.A(i, j) = acc;
    }
  return m;
}

BinaryState soljacic_iterate(const IterationMatrix& k, BinaryState e, double noise_sigma,
                             Rng& rng, long steps) {
  if (noise_sigma < 0.0) throw ArgumentError("soljacic_iterate: noise_sigma must be nonnegative");
  if (e.size() != k.A.rows) throw DimensionError("soljacic_iterate: state length mismatch");
  const std::size_t n = e.size();
  std::vector<double> drive(n);
  for (long step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const double* row = &k.A.a[i * n];
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * e[j];
      drive[i] = 2.0 * acc;
    }
    if (noise_sigma > 0.0)
      for (std::size_t i = 0; i < n; ++i) drive[i] += rng.normal(noise_sigma);
    for (std::size_t i = 0; i < n; ++i) e[i] = drive[i] > 0.0 ? 1 : 0;
  }
  return e;
}

BinaryState soljacic_iterate(const IterationMatrix& k, BinaryState e, double noise_sigma,
                             std::uint64_t seed, long steps) {
  Rng rng(seed);
  return soljacic_iterate(k, std::move(e), noise_sigma, rng, steps);
}

double soljacic_merit(const IterationMatrix& k, const BinaryState& e, double beta) {
  if (e.size() != k.A.rows) throw DimensionError("soljacic_merit: state length mismatch");
  std::vector<double> ed(e.begin(), e.end());
  auto ke = matvec(k.A, ed);
  double norm2 = 0.0;
  for (double v : ke) norm2 += v * v;
  return -0.5 * beta * norm2;
}

SpinConfig binary_to_spins(const BinaryState& e) {
  SpinConfig s(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) s[i] = 2 * static_cast<int>(e[i]) - 1;
  return s;
}

}  // namespace lagrising
