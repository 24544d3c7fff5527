#include "doctest.h"

#include <cmath>

#include "lagrising/errors.hpp"
#include "lagrising/lagrange.hpp"
#include "lagrising/rng.hpp"

using namespace lagrising;

namespace {

// f = x^2 with the single constraint g = x - 1
LagrangeProblem toy_problem(double penalty_c) {
  LagrangeProblem prob;
  prob.dim = 1;
  prob.penalty_c = penalty_c;
  prob.merit = [](std::span<const double> x) { return x[0] * x[0]; };
  prob.merit_grad = [](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * x[0]; };
  prob.constraints.push_back([](std::span<const double> x) { return x[0] - 1.0; });
  prob.constraint_grads.push_back([](std::span<const double>, std::span<double> g) { g[0] = 1.0; });
  return prob;
}

Instance pair_instance(double w) {
  Instance inst = Instance::make(2);
  inst.set_coupling(0, 1, w);
  return inst;
}

double rel_error(std::span<const double> got, std::span<const double> want) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    scale = std::max(scale, std::abs(want[i]));
  }
  return diff / std::max(scale, 1e-12);
}

}  // namespace

TEST_CASE("fd_gradient on elementary functions") {
  auto square = [](std::span<const double> x) { return x[0] * x[0]; };
  const double at_one[] = {1.0};
  auto g = fd_gradient(square, at_one);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-6));

  auto constant = [](std::span<const double>) { return 5.0; };
  const double x3[] = {0.2, -1.0, 4.0};
  auto gz = fd_gradient(constant, x3);
  for (double v : gz) CHECK(v == 0.0);

  CHECK_THROWS_AS(fd_gradient(square, at_one, 0.0), ArgumentError);
  auto bad = [](std::span<const double> x) { return std::log(x[0]); };
  const double neg[] = {-1.0};
  CHECK_THROWS_AS(fd_gradient(bad, neg), DivergenceError);
}

TEST_CASE("fd_gradient matches the analytic gradient of a random quadratic") {
  const std::size_t n = 5;
  Rng rng(9);
  Mat a(n, n);
  for (auto& v : a.a) v = rng.uniform(-1.0, 1.0);

  auto quad = [&](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc += x[i] * a(i, j) * x[j];
    return acc;
  };
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);

  std::vector<double> want(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) want[i] += (a(i, j) + a(j, i)) * x[j];

  auto got = fd_gradient(quad, x);
  CHECK(rel_error(got, want) <= 1e-6);
}

TEST_CASE("ising_lagrange values") {
  Instance inst = pair_instance(1.0);
  LagrangeProblem prob = ising_lagrange(inst, {});

  SUBCASE("feasible point, any multipliers") {
    MultiplierState st{{1.0, 1.0}, {0.0, 0.0}};
    CHECK(lagrange_value(prob, st) == 2.0);
    st.lambda = {3.0, 5.0};
    CHECK(lagrange_value(prob, st) == 2.0);
  }
  SUBCASE("infeasible point picks up the constraint terms") {
    MultiplierState st{{2.0, 0.0}, {1.0, 1.0}};
    CHECK(lagrange_value(prob, st) == -2.0);  // 0 + 1*(1-4) + 1*(1-0)
  }
  SUBCASE("alpha adds the loss term") {
    LagrangeProblem lossy = ising_lagrange(inst, {0.5, 0.5});
    MultiplierState st{{1.0, 1.0}, {0.0, 0.0}};
    CHECK(lagrange_value(lossy, st) == 3.0);
  }
  SUBCASE("bad alpha") {
    CHECK_THROWS_AS(ising_lagrange(inst, {1.0}), DimensionError);
    CHECK_THROWS_AS(ising_lagrange(inst, {-1.0, 0.0}), ArgumentError);
  }
}

TEST_CASE("lagrange_value on the toy problem") {
  LagrangeProblem prob = toy_problem(0.0);
  CHECK(lagrange_value(prob, {{1.0}, {7.0}}) == 1.0);
  CHECK(lagrange_value(prob, {{0.0}, {2.0}}) == -2.0);

  LagrangeProblem unconstrained;
  unconstrained.dim = 1;
  unconstrained.merit = [](std::span<const double> x) { return x[0] * x[0]; };
  CHECK(lagrange_value(unconstrained, {{3.0}, {}}) == 9.0);
}

TEST_CASE("augmented_lagrange_value") {
  SUBCASE("c = 0 reduces to the plain Lagrangian") {
    LagrangeProblem prob = toy_problem(0.0);
    MultiplierState st{{0.3}, {-1.2}};
    CHECK(augmented_lagrange_value(prob, st) == lagrange_value(prob, st));
  }
  SUBCASE("spin form with penalty") {
    LagrangeProblem prob = ising_lagrange(pair_instance(1.0), {}, 2.0);
    MultiplierState st{{2.0, 0.0}, {1.0, 1.0}};
    CHECK(augmented_lagrange_value(prob, st) == 8.0);  // -2 + (2/2)(9 + 1)
  }
  SUBCASE("satisfied constraint kills both added terms") {
    LagrangeProblem prob = toy_problem(4.0);
    CHECK(augmented_lagrange_value(prob, {{1.0}, {123.0}}) == 1.0);
  }
}

TEST_CASE("augmentation consistency at feasible spin points") {
  const double weights[] = {-1.0, 1.0};
  Instance inst = random_instance(6, 0.7, weights, 3);
  LagrangeProblem prob = ising_lagrange(inst, {}, 2.5);
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    MultiplierState st;
    st.x.resize(6);
    st.lambda.resize(6);
    for (auto& v : st.x) v = rng.bernoulli(0.5) ? 1.0 : -1.0;
    for (auto& v : st.lambda) v = rng.uniform(-2.0, 2.0);
    CHECK(augmented_lagrange_value(prob, st) == lagrange_value(prob, st));
  }
}

TEST_CASE("multiplier gradient of the augmented Lagrangian is g(x)") {
  const double weights[] = {-1.0, 1.0};
  Instance inst = random_instance(5, 0.8, weights, 6);
  LagrangeProblem prob = ising_lagrange(inst, {}, 1.5);
  Rng rng(7);

  for (int trial = 0; trial < 20; ++trial) {
    MultiplierState st;
    st.x.resize(5);
    st.lambda.resize(5);
    for (auto& v : st.x) v = rng.uniform(-1.5, 1.5);
    for (auto& v : st.lambda) v = rng.uniform(-1.0, 1.0);

    auto in_lambda = [&](std::span<const double> lam) {
      MultiplierState probe{st.x, std::vector<double>(lam.begin(), lam.end())};
      return augmented_lagrange_value(prob, probe);
    };
    auto fd = fd_gradient(in_lambda, st.lambda);
    auto want = constraint_values(prob, st.x);
    CHECK(rel_error(fd, want) <= 1e-6);
  }
}

TEST_CASE("descent_ascent_step") {
  SUBCASE("stationary feasible point stays put") {
    LagrangeProblem prob = toy_problem(0.0);
    MultiplierState st{{1.0}, {-2.0}};  // 2x + lambda = 0, g = 0
    auto next = descent_ascent_step(prob, st, 0.5, 0.5);
    CHECK(next.x[0] == 1.0);
    CHECK(next.lambda[0] == -2.0);
  }
  SUBCASE("single step arithmetic") {
    LagrangeProblem prob = toy_problem(0.0);
    MultiplierState st{{0.0}, {0.0}};
    auto next = descent_ascent_step(prob, st, 0.5, 0.5);
    CHECK(next.x[0] == 0.0);
    CHECK(next.lambda[0] == -0.5);
  }
  SUBCASE("iteration converges to the constrained optimum (1, -2)") {
    LagrangeProblem prob = toy_problem(1.0);
    MultiplierState st{{0.0}, {0.0}};
    for (int step = 0; step < 100000; ++step)
      st = descent_ascent_step(prob, st, kDefaultKappa, kDefaultKappaPrime);
    CHECK(st.x[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(st.lambda[0] == doctest::Approx(-2.0).epsilon(1e-7));
  }
  SUBCASE("bad steps") {
    LagrangeProblem prob = toy_problem(0.0);
    CHECK_THROWS_AS(descent_ascent_step(prob, {{0.0}, {0.0}}, 0.0, 0.1), ArgumentError);
  }
}

TEST_CASE("large penalty drives feasibility on the toy problem") {
  LagrangeProblem prob = toy_problem(10.0);
  MultiplierState st{{0.0}, {0.0}};
  bool feasible = false;
  for (int step = 0; step < 100000 && !feasible; ++step) {
    st = descent_ascent_step(prob, st, kDefaultKappa, kDefaultKappaPrime);
    feasible = std::abs(st.x[0] - 1.0) <= 1e-6;
  }
  CHECK(feasible);
}

TEST_CASE("kkt_check residuals") {
  LagrangeProblem prob = toy_problem(0.0);
  SUBCASE("analytic optimum passes") {
    auto rep = kkt_check(prob, {{1.0}, {-2.0}}, 1e-9);
    CHECK(rep.stationarity == 0.0);
    CHECK(rep.feasibility == 0.0);
    CHECK(rep.pass);
  }
  SUBCASE("infeasible point fails with the right residual") {
    auto rep = kkt_check(prob, {{0.5}, {-1.0}}, 1e-6);
    CHECK(rep.feasibility == doctest::Approx(0.5));
    CHECK(!rep.pass);
  }
  SUBCASE("rounded spin configurations are always feasible") {
    const double weights[] = {-1.0, 1.0};
    Instance inst = random_instance(6, 0.5, weights, 12);
    LagrangeProblem spin = ising_lagrange(inst, {});
    MultiplierState st;
    st.x = {1.0, -1.0, 1.0, 1.0, -1.0, -1.0};
    st.lambda.assign(6, 0.77);
    auto rep = kkt_check(spin, st, 1e-9);
    CHECK(rep.feasibility == 0.0);
  }
  SUBCASE("json shape") {
    auto rep = kkt_check(prob, {{1.0}, {-2.0}}, 1e-9);
    auto text = kkt_to_json(rep);
    CHECK(text.find("\"stationarity\"") != std::string::npos);
    CHECK(text.find("\"feasibility\"") != std::string::npos);
    CHECK(text.find("\"pass\": true") != std::string::npos);
  }
}

// The x-gradient of the augmented spin Lagrangian in closed form:
//   -kappa dL_c/dx_i = 2 kappa ((lambda_i - alpha_i) x_i + c x_i - c x_i^3 - sum_j J_ij x_j)
TEST_CASE("augmented gradient closed form matches finite differences") {
  const double weights[] = {-1.0, 1.0};
  Instance inst = random_instance(6, 0.7, weights, 19);
  std::vector<double> alpha = {0.2, 0.0, 1.0, 0.5, 0.3, 0.0};
  Rng rng(20);

  // c = 0 is the plain descent/ascent system; c > 0 adds the cubic terms
  for (double c : {0.0, 0.7}) {
  LagrangeProblem prob = ising_lagrange(inst, alpha, c);
  for (int trial = 0; trial < 20; ++trial) {
    MultiplierState st;
    st.x.resize(6);
    st.lambda.resize(6);
    for (auto& v : st.x) v = rng.uniform(-1.5, 1.5);
    for (auto& v : st.lambda) v = rng.uniform(-1.0, 1.0);

    const double kappa = 0.25;
    std::vector<double> closed(6);
    for (std::size_t i = 0; i < 6; ++i) {
      double coup = 0.0;
      for (std::size_t j = 0; j < 6; ++j) coup += inst.J(i, j) * st.x[j];
      closed[i] = 2.0 * kappa *
                  ((st.lambda[i] - alpha[i]) * st.x[i] + c * st.x[i] -
                   c * st.x[i] * st.x[i] * st.x[i] - coup);
    }

    auto in_x = [&](std::span<const double> x) {
      MultiplierState probe{std::vector<double>(x.begin(), x.end()), st.lambda};
      return augmented_lagrange_value(prob, probe);
    };
    auto fd = fd_gradient(in_x, st.x);
    for (auto& v : fd) v *= -kappa;
    CHECK(rel_error(closed, fd) <= 1e-6);

    auto analytic = augmented_lagrange_grad_x(prob, st);
    for (auto& v : analytic) v *= -kappa;
    CHECK(rel_error(closed, analytic) <= 1e-9);
  }
  }
}
