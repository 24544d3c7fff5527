#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lagrising/instance.hpp"
#include "lagrising/rng.hpp"

namespace lagrising {

// A per-step linear map, either the gain/coupling update matrix
// (1 + 2 k dt gamma_i) delta_ij - 2 k dt J_ij, or the square root
// K with K K = J + alpha M used by the thresholded iteration.
struct IterationMatrix {
  enum class Kind { matmul, soljacic };
  Kind kind = Kind::matmul;
  Mat A;
  double alpha_shift = 0.0;
  double kappa_dt = 0.0;
};

// entries exactly 0 or 1
using BinaryState = std::vector<std::uint8_t>;

IterationMatrix build_matmul_matrix(const Instance& inst, std::span<const double> gamma,
                                    double kappa_dt);

// Repeated E <- A E; with normalize the vector is rescaled to unit max-norm
// after every step (the direction is the answer).
std::vector<double> matmul_iterate(const IterationMatrix& m, std::vector<double> e,
                                   long steps, bool normalize);

// K = sqrt(J + alpha M) through a cyclic-Jacobi eigendecomposition with
// nonnegative square roots. M defaults to the identity. Throws NotPsdError
// (reporting the minimum eigenvalue and smallest admissible alpha) when
// J + alpha M has an eigenvalue below -1e-10.
IterationMatrix build_soljacic_matrix(const Instance& inst, double alpha,
                                      const Mat* m_choice = nullptr);

// alpha = max(0, -lambda_min(J)) + 0.1, guaranteeing J + alpha I is PSD
double default_soljacic_alpha(const Instance& inst);

// Noisy thresholded iteration e <- u(2 K e + N), N ~ Normal(0, sigma^2) from
// the supplied stream; u(0) = 0.
BinaryState soljacic_iterate(const IterationMatrix& k, BinaryState e, double noise_sigma,
                             Rng& rng, long steps);
BinaryState soljacic_iterate(const IterationMatrix& k, BinaryState e, double noise_sigma,
                             std::uint64_t seed, long steps);

// effective merit -(beta/2) sum_ij (K K)_ij e_i e_j = -(beta/2) |K e|^2
double soljacic_merit(const IterationMatrix& k, const BinaryState& e, double beta = 1.0);

// s_i = 2 e_i - 1
SpinConfig binary_to_spins(const BinaryState& e);

}  // namespace lagrising
