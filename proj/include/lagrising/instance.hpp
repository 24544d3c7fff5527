#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lagrising/linalg.hpp"

namespace lagrising {

// Spin assignment; entries are exactly -1 or +1.
using SpinConfig = std::vector<int>;

// Quadratic spin problem
//
//   energy(s) = sum_{i,j} J[i][j] s_i s_j  +  sum_i h_i s_i  +  offset
//
// with the full double sum over ordered pairs. J is symmetric with zero
// diagonal; edge-based quantities (cut, edge weight) use the i<j sum.
struct Instance {
  std::string name;
  std::size_t n = 0;
  Mat J;
  std::optional<std::vector<double>> h;
  double offset = 0.0;

  static Instance make(std::size_t n, std::string name = "");

  // Sets J[i][j] and J[j][i]; rejects i == j.
  void set_coupling(std::size_t i, std::size_t j, double w);

  std::size_t edge_count() const;       // nonzero pairs i<j
  double total_edge_weight() const;     // W = sum_{i<j} J[i][j]
  bool has_field() const;               // h present and not all zero

  bool operator==(const Instance&) const = default;
};

struct EnergyReport {
  double energy;    // full double-sum value, field and offset included
  double edge_sum;  // sum_{i<j} J[i][j] s_i s_j
  double cut;       // (W - edge_sum) / 2
  bool offset_included;
};

// Text format: optional '#' comment lines, a header "n m", then m lines
// "u v w" with 1-based vertices. Each edge may be listed once; duplicates,
// self-loops, bad indices, and edge-count mismatches are format errors.
Instance parse_gset(const std::string& text, std::string name = "");
std::string to_gset(const Instance& inst);

// Canonical JSON: {name, n, edges: [[i, j, w]...] with 0-based i<j, h?, offset}.
std::string to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

EnergyReport energy(const Instance& inst, const SpinConfig& s);

// Max-Cut value sum_{i<j} J[i][j] (1 - s_i s_j) / 2; field-free instances only.
double cut_value(const Instance& inst, const SpinConfig& s);

// Converts the field into couplings to an ancilla spin at index 0 with
// J[0][i] = h[i-1] / 2. For any s with s_0 = +1 the energy is unchanged.
// Errors when there is no (or an all-zero) field, so it cannot be applied twice.
Instance absorb_field(const Instance& inst);

// Exhaustive ground-state search, n <= 24. Ties break toward the
// lexicographically smallest configuration (-1 before +1).
std::pair<SpinConfig, double> brute_force_ground(const Instance& inst);

// sign of the (real part of the) amplitude; exact zero rounds to +1.
SpinConfig round_to_spins(std::span<const double> x);
SpinConfig round_to_spins(std::span<const std::complex<double>> x);
// phase-oscillator readout: sign of cos(phi)
SpinConfig round_phases_to_spins(std::span<const double> phi);

// Each unordered pair is nonzero with probability `density`; weights drawn
// uniformly from `weights`. Deterministic for a given seed.
Instance random_instance(std::size_t n, double density, std::span<const double> weights,
                         std::uint64_t seed);

}  // namespace lagrising
