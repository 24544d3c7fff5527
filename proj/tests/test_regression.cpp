#include "doctest.h"

#include <cmath>

#include "lagrising/engine.hpp"
#include "lagrising/errors.hpp"
#include "lagrising/regression.hpp"
#include "lagrising/rng.hpp"

using namespace lagrising;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

// every spin assignment of the encoded instance, with the ancilla (if any)
// pinned to +1
std::vector<SpinConfig> weight_spin_configs(const BitEncoding& enc) {
  std::size_t digits = enc.n_weights * enc.bits;
  std::vector<SpinConfig> out;
  for (std::uint64_t mask = 0; mask < (1ull << digits); ++mask) {
    SpinConfig s(enc.spin_count(), 1);
    for (std::size_t b = 0; b < digits; ++b)
      s[(enc.ancilla_index ? 1 : 0) + b] = (mask >> b) & 1 ? 1 : -1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("quadratic matrix of the design") {
  // X = [[1,2],[3,4]] -> X^T X = [[10,14],[14,20]]
  RegressionProblem prob = RegressionProblem::make(mat2(1, 2, 3, 4), {0.0, 0.0}, 1);
  auto [inst, enc] = build_regression_instance(prob);
  // with y = 0 there is no field: spins = weights directly, couplings carry
  // the off-diagonal element 14 * 2^(0+0)
  CHECK(!enc.ancilla_index);
  CHECK(inst.n == 2);
  CHECK(inst.J(0, 1) == 14.0);
  // diagonal of Q folds into the offset
  CHECK(inst.offset == 10.0 + 20.0);
}

TEST_CASE("identity design with one bit per weight") {
  RegressionProblem prob = RegressionProblem::make(Mat::identity(2), {1.0, 1.0}, 1);
  auto [inst, enc] = build_regression_instance(prob);
  CHECK(inst.n == 3);  // two digits plus the ancilla
  CHECK(enc.ancilla_index == std::size_t{0});

  auto [ground, e] = brute_force_ground(inst);
  auto w = decode_weights(enc, ground);
  CHECK(w == std::vector<double>{1.0, 1.0});
  CHECK(e == 0.0);  // perfect fit, residual 0
}

TEST_CASE("decodable weight lattice") {
  CHECK(decodable_levels(1, 0) == std::vector<double>{-1.0, 1.0});
  CHECK(decodable_levels(2, 1) == std::vector<double>{-3.0, -1.0, 1.0, 3.0});
  auto lv = decodable_levels(3, 2);
  CHECK(lv.size() == 8);
  CHECK(lv.front() == -7.0);
  CHECK(lv.back() == 7.0);
}

TEST_CASE("decode_weights") {
  SUBCASE("one bit per weight, no ancilla") {
    BitEncoding enc;
    enc.n_weights = 2;
    enc.bits = 1;
    enc.msb_power = 0;
    CHECK(decode_weights(enc, {1, -1}) == std::vector<double>{1.0, -1.0});
  }
  SUBCASE("two bits, powers 2 and 1") {
    BitEncoding enc;
    enc.n_weights = 1;
    enc.bits = 2;
    enc.msb_power = 1;
    CHECK(decode_weights(enc, {1, 1}) == std::vector<double>{3.0});  // 2 + 1
  }
  SUBCASE("three bits, powers 4..1") {
    BitEncoding enc;
    enc.n_weights = 1;
    enc.bits = 3;
    enc.msb_power = 2;
    CHECK(decode_weights(enc, {1, -1, 1}) == std::vector<double>{3.0});  // 4 - 2 + 1
  }
  SUBCASE("gauge fixing flips everything when the ancilla is -1") {
    BitEncoding enc;
    enc.n_weights = 1;
    enc.bits = 2;
    enc.msb_power = 1;
    enc.ancilla_index = 0;
    auto w_plus = decode_weights(enc, {1, 1, -1});    // 2 - 1 = 1
    auto w_minus = decode_weights(enc, {-1, -1, 1});  // global flip of the same state
    CHECK(w_plus == std::vector<double>{1.0});
    CHECK(w_minus == w_plus);
  }
  SUBCASE("wrong spin count") {
    BitEncoding enc;
    enc.n_weights = 2;
    enc.bits = 2;
    enc.msb_power = 1;
    CHECK_THROWS_AS(decode_weights(enc, {1, 1}), DimensionError);
  }
}

TEST_CASE("spin-encoded energy equals the squared residual exactly") {
  // d=2, B=2, integer design: enumerate all 16 decodable weight vectors
  Rng rng(8);
  for (int round = 0; round < 5; ++round) {
    Mat x(3, 2);
    std::vector<double> y(3);
    for (auto& v : x.a) v = std::floor(rng.uniform(-3.0, 4.0));
    for (auto& v : y) v = std::floor(rng.uniform(-3.0, 4.0));
    RegressionProblem prob = RegressionProblem::make(x, y, 2);
    auto [inst, enc] = build_regression_instance(prob);

    for (const auto& s : weight_spin_configs(enc)) {
      auto w = decode_weights(enc, s);
      CHECK(energy(inst, s).energy == regression_residual(prob, w));
    }
  }
}

TEST_CASE("ground state decodes to the lattice-optimal weights") {
  Rng rng(12);
  for (int round = 0; round < 10; ++round) {
    int bits = 1 + static_cast<int>(rng.index(3));  // B in 1..3
    Mat x(4, 2);
    std::vector<double> y(4);
    for (auto& v : x.a) v = std::floor(rng.uniform(-3.0, 4.0));
    for (auto& v : y) v = std::floor(rng.uniform(-6.0, 7.0));
    RegressionProblem prob = RegressionProblem::make(x, y, bits);
    auto [inst, enc] = build_regression_instance(prob);

    auto [ground, ge] = brute_force_ground(inst);
    auto w = decode_weights(enc, ground);

    // exhaustive search over the decodable lattice
    auto levels = decodable_levels(bits, bits - 1);
    double best = std::numeric_limits<double>::infinity();
    for (double w0 : levels)
      for (double w1 : levels) {
        double r = regression_residual(prob, std::vector<double>{w0, w1});
        best = std::min(best, r);
      }
    CHECK(regression_residual(prob, w) == best);
    CHECK(ge == best);
  }
}

TEST_CASE("least_squares_oracle") {
  SUBCASE("identity design returns y") {
    RegressionProblem prob = RegressionProblem::make(Mat::identity(3), {1.0, -2.0, 0.5}, 1);
    auto sol = least_squares_oracle(prob);
    CHECK(sol.w[0] == doctest::Approx(1.0));
    CHECK(sol.w[1] == doctest::Approx(-2.0));
    CHECK(sol.w[2] == doctest::Approx(0.5));
    CHECK(sol.residual == doctest::Approx(0.0));
  }
  SUBCASE("column of ones fits the mean") {
    Mat x(2, 1);
    x(0, 0) = x(1, 0) = 1.0;
    RegressionProblem prob = RegressionProblem::make(x, {0.0, 2.0}, 1);
    auto sol = least_squares_oracle(prob);
    CHECK(sol.w[0] == doctest::Approx(1.0));
    CHECK(sol.residual == doctest::Approx(2.0));
  }
  SUBCASE("singular design falls back to ridge regularization") {
    Mat x(2, 2);  // two identical columns
    x(0, 0) = x(0, 1) = 1.0;
    x(1, 0) = x(1, 1) = 2.0;
    RegressionProblem prob = RegressionProblem::make(x, {1.0, 2.0}, 1);
    auto sol = least_squares_oracle(prob);
    CHECK(sol.residual == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  }
  SUBCASE("oracle beats random perturbations") {
    Rng rng(77);
    Mat x(8, 3);
    std::vector<double> y(8);
    for (auto& v : x.a) v = rng.uniform(-2.0, 2.0);
    for (auto& v : y) v = rng.uniform(-2.0, 2.0);
    RegressionProblem prob = RegressionProblem::make(x, y, 1);
    auto sol = least_squares_oracle(prob);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> w = sol.w;
      for (auto& v : w) v += rng.uniform(-0.3, 0.3);
      CHECK(sol.residual <= regression_residual(prob, w) + 1e-12);
    }
  }
}

TEST_CASE("solver residual is bounded below by the oracle residual") {
  Rng rng(31);
  Mat x(5, 2);
  std::vector<double> y(5);
  for (auto& v : x.a) v = std::floor(rng.uniform(-2.0, 3.0));
  for (auto& v : y) v = std::floor(rng.uniform(-3.0, 4.0));
  RegressionProblem prob = RegressionProblem::make(x, y, 2);
  auto [inst, enc] = build_regression_instance(prob);
  auto oracle = least_squares_oracle(prob);

  SolveOptions opt;
  opt.solver = "opo";
  opt.restarts = 8;
  opt.seed = 5;
  opt.params.alpha = {1.0};
  opt.params.beta_sat = 0.2;
  opt.schedule = {GainSchedule::Kind::linear_ramp, 0.0, 0.04, 2.0, 0.01};
  opt.cfg.steps = 2000;
  opt.cfg.dt = 0.025;
  opt.cfg.record_every = 2000;
  auto res = run_solver(inst, opt);
  auto w = decode_weights(enc, res.best.final_spins);
  CHECK(regression_residual(prob, w) >= oracle.residual - 1e-9);
}

TEST_CASE("csv ingestion") {
  SUBCASE("well-formed data, last column is the target") {
    auto prob = regression_from_csv("1,0,1\n0,1,1\n", 1);
    CHECK(prob.X.rows == 2);
    CHECK(prob.X.cols == 2);
    CHECK(prob.y == std::vector<double>{1.0, 1.0});
    CHECK(prob.bits == 1);
    CHECK(prob.msb_power == 0);
  }
  SUBCASE("comments and blank lines are skipped") {
    auto prob = regression_from_csv("# data\n\n2,3\n4,5\n", 2);
    CHECK(prob.X.rows == 2);
    CHECK(prob.X.cols == 1);
  }
  SUBCASE("malformed rows are format errors") {
    CHECK_THROWS_AS(regression_from_csv("1,2\n3\n", 1), FormatError);
    CHECK_THROWS_AS(regression_from_csv("1,abc\n", 1), FormatError);
    CHECK_THROWS_AS(regression_from_csv("", 1), FormatError);
    CHECK_THROWS_AS(regression_from_csv("5\n", 1), FormatError);
  }
  SUBCASE("bad bit count") {
    CHECK_THROWS_AS(regression_from_csv("1,1\n", 0), ArgumentError);
  }
}
