#include "lagrising/regression.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lagrising/errors.hpp"

namespace lagrising {

RegressionProblem RegressionProblem::make(Mat x, std::vector<double> y, int bits) {
  return make(std::move(x), std::move(y), bits, bits - 1);
}

RegressionProblem RegressionProblem::make(Mat x, std::vector<double> y, int bits,
                                          int msb_power) {
  if (x.rows < 1 || x.cols < 1) throw ArgumentError("regression: need at least one row and column");
  if (y.size() != x.rows) throw DimensionError("regression: y length != observation count");
  if (bits < 1) throw ArgumentError("regression: bits must be >= 1");
  RegressionProblem prob;
  prob.X = std::move(x);
  prob.y = std::move(y);
  prob.bits = bits;
  prob.msb_power = msb_power;
  return prob;
}

std::size_t BitEncoding::spin_count() const {
  return n_weights * static_cast<std::size_t>(bits) + (ancilla_index ? 1 : 0);
}

std::size_t BitEncoding::spin_index(std::size_t weight, int bit) const {
  if (weight >= n_weights || bit < 0 || bit >= bits)
    throw ArgumentError("BitEncoding: digit out of range");
  std::size_t base = ancilla_index ? 1 : 0;
  return base + weight * static_cast<std::size_t>(bits) + static_cast<std::size_t>(bit);
}

std::pair<Instance, BitEncoding> build_regression_instance(const RegressionProblem& prob) {
  const std::size_t n_obs = prob.X.rows;
  const std::size_t d = prob.X.cols;
  const int b = prob.bits;

  // weight-level quadratic Q = X^T X, field q = -2 X^T y, constant sum y^2
  Mat q_mat(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n_obs; ++r) acc += prob.X(r, j) * prob.X(r, k);
      q_mat(j, k) = acc;
    }
  std::vector<double> q_vec(d, 0.0);
  double const_term = 0.0;
  for (std::size_t r = 0; r < n_obs; ++r) {
    for (std::size_t j = 0; j < d; ++j) q_vec[j] += -2.0 * prob.X(r, j) * prob.y[r];
    const_term += prob.y[r] * prob.y[r];
  }

  const std::size_t n_digits = d * static_cast<std::size_t>(b);
  Instance pre = Instance::make(n_digits, "regression");
  std::vector<double> field(n_digits, 0.0);
  double offset = const_term;

  auto pw = [&](int bit) { return std::ldexp(1.0, prob.msb_power - bit); };

  for (std::size_t j = 0; j < d; ++j)
    for (int bj = 0; bj < b; ++bj) {
      std::size_t sj = j * b + bj;
      field[sj] = q_vec[j] * pw(bj);
      for (std::size_t k = 0; k < d; ++k)
        for (int bk = 0; bk < b; ++bk) {
          std::size_t sk = k * b + bk;
          double coef = q_mat(j, k) * pw(bj) * pw(bk);
          if (sj == sk)
            offset += coef;  // s^2 = 1 — the digit's diagonal term is a constant
          else
            pre.J(sj, sk) = coef;
        }
    }
  pre.offset = offset;

  BitEncoding enc;
  enc.n_weights = d;
  enc.bits = b;
  enc.msb_power = prob.msb_power;

  bool any_field = std::any_of(field.begin(), field.end(), [](double v) { return v != 0.0; });
  if (!any_field) return {std::move(pre), enc};

  pre.h = std::move(field);
  Instance absorbed = absorb_field(pre);
  enc.ancilla_index = 0;
  return {std::move(absorbed), enc};
}

std::vector<double> decode_weights(const BitEncoding& enc, const SpinConfig& s) {
  if (s.size() != enc.spin_count())
    throw DimensionError("decode_weights: spin count does not match encoding");
  int gauge = 1;
  if (enc.ancilla_index) {
    int anc = s[*enc.ancilla_index];
    if (anc != 1 && anc != -1) throw ArgumentError("decode_weights: spins must be +-1");
    gauge = anc;  // flip everything when the ancilla came out -1
  }
  std::vector<double> w(enc.n_weights, 0.0);
  for (std::size_t j = 0; j < enc.n_weights; ++j)
    for (int bit = 0; bit < enc.bits; ++bit)
      w[j] += gauge * s[enc.spin_index(j, bit)] * std::ldexp(1.0, enc.power_of_bit(bit));
  return w;
}

std::vector<double> decodable_levels(int bits, int msb_power) {
  if (bits < 1) throw ArgumentError("decodable_levels: bits must be >= 1");
  std::vector<double> levels{0.0};
  for (int bit = 0; bit < bits; ++bit) {
    double p = std::ldexp(1.0, msb_power - bit);
    std::vector<double> next;
    next.reserve(levels.size() * 2);
    for (double v : levels) {
      next.push_back(v - p);
      next.push_back(v + p);
    }
    levels = std::move(next);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

double regression_residual(const RegressionProblem& prob, std::span<const double> w) {
  if (w.size() != prob.X.cols) throw DimensionError("regression_residual: weight length mismatch");
  double acc = 0.0;
  for (std::size_t r = 0; r < prob.X.rows; ++r) {
    double pred = 0.0;
    for (std::size_t j = 0; j < prob.X.cols; ++j) pred += prob.X(r, j) * w[j];
    double err = pred - prob.y[r];
    acc += err * err;
  }
  return acc;
}

LsqSolution least_squares_oracle(const RegressionProblem& prob) {
  const std::size_t d = prob.X.cols;
  Mat q(d, d);
  std::vector<double> rhs(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      double acc = 0.0;
      for (std::size_t r = 0; r < prob.X.rows; ++r) acc += prob.X(r, j) * prob.X(r, k);
      q(j, k) = acc;
    }
    for (std::size_t r = 0; r < prob.X.rows; ++r) rhs[j] += prob.X(r, j) * prob.y[r];
  }

  std::vector<double> w;
  double ridge = 1e-12;
  Mat attempt = q;
  while (!cholesky_solve(attempt, rhs, w)) {
    attempt = q;
    for (std::size_t j = 0; j < d; ++j) attempt(j, j) += ridge;
    ridge *= 10.0;
    if (ridge > 1.0) throw DivergenceError("least_squares_oracle: normal equations unsolvable");
  }
  return {w, regression_residual(prob, w)};
}

RegressionProblem regression_from_csv(const std::string& text, int bits) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    // strip comments and blank lines
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    if (blank || line[line.find_first_not_of(" \t")] == '#') continue;

    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &pos);
      } catch (...) {
        throw FormatError("csv: non-numeric cell '" + cell + "'");
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) throw FormatError("csv: trailing characters in cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() < 2) throw FormatError("csv: rows need at least one feature and the target");
    if (width == 0) width = row.size();
    if (row.size() != width) throw FormatError("csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("csv: no data rows");

  Mat x(rows.size(), width - 1);
  std::vector<double> y(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j + 1 < width; ++j) x(r, j) = rows[r][j];
    y[r] = rows[r][width - 1];
  }
  return RegressionProblem::make(std::move(x), std::move(y), bits);
}

}  // namespace lagrising
