#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagrising/instance.hpp"

namespace lagrising {

// Linear least squares min_w |X w - y|^2 with each weight encoded as B
// signed binary digits: w_j = sum_m s_{j,m} 2^m, s in {-1, +1}, powers
// msb_power down to msb_power - bits + 1.
struct RegressionProblem {
  Mat X;                  // rows = observations, cols = features
  std::vector<double> y;
  int bits = 1;
  int msb_power = 0;

  static RegressionProblem make(Mat x, std::vector<double> y, int bits);
  static RegressionProblem make(Mat x, std::vector<double> y, int bits, int msb_power);
};

// Where each (weight, power) digit lives in the spin vector, plus the
// ancilla introduced when the linear field is absorbed.
struct BitEncoding {
  std::size_t n_weights = 0;
  int bits = 1;
  int msb_power = 0;
  std::optional<std::size_t> ancilla_index;

  std::size_t spin_count() const;
  std::size_t spin_index(std::size_t weight, int bit) const;  // bit 0 = msb
  int power_of_bit(int bit) const { return msb_power - bit; }
};

// Builds the spin instance whose energy equals |X w - y|^2 exactly for every
// decodable w: couplings Q_jk 2^(m+l) between distinct digits, digit fields
// q_j 2^m absorbed through an ancilla spin, diagonal terms folded into the
// offset.
std::pair<Instance, BitEncoding> build_regression_instance(const RegressionProblem& prob);

// Gauge-fixes the ancilla to +1 (flipping all spins when needed), then
// decodes w_j = sum_m s_{j,m} 2^m.
std::vector<double> decode_weights(const BitEncoding& enc, const SpinConfig& s);

// All 2^bits values a single weight can take, ascending.
std::vector<double> decodable_levels(int bits, int msb_power);

struct LsqSolution {
  std::vector<double> w;
  double residual;  // |X w - y|^2
};

// Unconstrained optimum via the normal equations; Tikhonov fallback when
// X^T X is singular.
LsqSolution least_squares_oracle(const RegressionProblem& prob);

double regression_residual(const RegressionProblem& prob, std::span<const double> w);

// rows = observations, comma separated, last column = y
RegressionProblem regression_from_csv(const std::string& text, int bits);

}  // namespace lagrising
