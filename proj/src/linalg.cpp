#include "lagrising/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lagrising/errors.hpp"

namespace lagrising {

std::vector<double> matvec(const Mat& m, std::span<const double> x) {
  if (x.size() != m.cols) throw DimensionError("matvec: size mismatch");
  std::vector<double> out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    const double* row = &m.a[i * m.cols];
    for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

Mat matmul(const Mat& lhs, const Mat& rhs) {
  if (lhs.cols != rhs.rows) throw DimensionError("matmul: size mismatch");
  Mat out(lhs.rows, rhs.cols);
  for (std::size_t i = 0; i < lhs.rows; ++i)
    for (std::size_t k = 0; k < lhs.cols; ++k) {
      double v = lhs(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols; ++j) out(i, j) += v * rhs(k, j);
    }
  return out;
}

Mat transpose(const Mat& m) {
  Mat out(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

double max_abs_diff(const Mat& lhs, const Mat& rhs) {
  if (lhs.rows != rhs.rows || lhs.cols != rhs.cols)
    throw DimensionError("max_abs_diff: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.a.size(); ++i)
    worst = std::max(worst, std::abs(lhs.a[i] - rhs.a[i]));
  return worst;
}

namespace {

double off_diag_norm(const Mat& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (i != j) acc += m(i, j) * m(i, j);
  return std::sqrt(acc);
}

}  // namespace

EigenSym jacobi_eigen(const Mat& sym, double off_tol, int max_sweeps) {
  if (sym.rows != sym.cols) throw DimensionError("jacobi_eigen: matrix not square");
  const std::size_t n = sym.rows;
  Mat a = sym;
  Mat v = Mat::identity(n);

  for (int sweep = 0; sweep < max_sweeps && off_diag_norm(a) > off_tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigenSym out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);

  // sort ascending, permuting eigenvector columns alongside
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t lhs, std::size_t rhs) { return out.values[lhs] < out.values[rhs]; });
  EigenSym sorted;
  sorted.values.resize(n);
  sorted.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted.values[k] = out.values[order[k]];
    for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = v(i, order[k]);
  }
  return sorted;
}

bool cholesky_solve(Mat sym, std::vector<double> b, std::vector<double>& out) {
  if (sym.rows != sym.cols || b.size() != sym.rows)
    throw DimensionError("cholesky_solve: size mismatch");
  const std::size_t n = sym.rows;

  // in-place lower Cholesky
  for (std::size_t j = 0; j < n; ++j) {
    double d = sym(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= sym(j, k) * sym(j, k);
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    sym(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = sym(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= sym(i, k) * sym(j, k);
      sym(i, j) = s / d;
    }
  }
  // forward then backward substitution
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= sym(i, k) * b[k];
    b[i] = s / sym(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= sym(k, ii) * b[k];
    b[ii] = s / sym(ii, ii);
  }
  out = std::move(b);
  return true;
}

}  // namespace lagrising
