#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lagrising {

// Dense row-major matrix. Small problems only; no view machinery.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const Mat&) const = default;
};

std::vector<double> matvec(const Mat& m, std::span<const double> x);
Mat matmul(const Mat& lhs, const Mat& rhs);
Mat transpose(const Mat& m);
double max_abs_diff(const Mat& lhs, const Mat& rhs);

struct EigenSym {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column k is the eigenvector of values[k]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps until the
// off-diagonal Frobenius norm drops below off_tol.
EigenSym jacobi_eigen(const Mat& sym, double off_tol = 1e-12, int max_sweeps = 100);

// Solves sym*x = b for symmetric positive definite sym; returns false when a
// Cholesky pivot fails.
bool cholesky_solve(Mat sym, std::vector<double> b, std::vector<double>& out);

}  // namespace lagrising
