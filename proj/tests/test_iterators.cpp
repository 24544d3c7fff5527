#include "doctest.h"

#include <cmath>
#include <set>

#include "lagrising/errors.hpp"
#include "lagrising/iterators.hpp"
#include "lagrising/rng.hpp"

using namespace lagrising;

namespace {

Instance gaussian_instance(std::size_t n, std::uint64_t seed) {
  Instance inst = Instance::make(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double w = rng.normal(1.0);
      inst.J(i, j) = inst.J(j, i) = w;
    }
  return inst;
}

}  // namespace

TEST_CASE("jacobi_eigen reconstructs symmetric matrices") {
  Instance inst = gaussian_instance(7, 5);
  auto eig = jacobi_eigen(inst.J, 1e-12);

  // A v_k = lambda_k v_k
  for (std::size_t k = 0; k < 7; ++k) {
    std::vector<double> v(7);
    for (std::size_t i = 0; i < 7; ++i) v[i] = eig.vectors(i, k);
    auto av = matvec(inst.J, v);
    for (std::size_t i = 0; i < 7; ++i)
      CHECK(av[i] == doctest::Approx(eig.values[k] * v[i]).epsilon(1e-9).scale(1.0));
  }
  // orthonormal columns
  for (std::size_t a = 0; a < 7; ++a)
    for (std::size_t b = 0; b < 7; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 7; ++i) dot += eig.vectors(i, a) * eig.vectors(i, b);
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
    }
  // ascending eigenvalues
  for (std::size_t k = 1; k < 7; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
}

TEST_CASE("jacobi_eigen on a known 2x2") {
  Mat m(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 2.0;
  m(0, 1) = m(1, 0) = 1.0;
  auto eig = jacobi_eigen(m);
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(3.0));
}

TEST_CASE("build_matmul_matrix") {
  Instance inst = gaussian_instance(5, 9);
  SUBCASE("kappa_dt = 0 gives the identity") {
    double g = 1.0;
    auto m = build_matmul_matrix(inst, std::span<const double>(&g, 1), 0.0);
    CHECK(max_abs_diff(m.A, Mat::identity(5)) == 0.0);
  }
  SUBCASE("single-oscillator arithmetic") {
    Instance one = Instance::make(1);
    double g = 1.0;
    auto m = build_matmul_matrix(one, std::span<const double>(&g, 1), 0.05);
    CHECK(m.A(0, 0) == doctest::Approx(1.1));
  }
  SUBCASE("symmetric in, symmetric out") {
    std::vector<double> g = {0.5};
    auto m = build_matmul_matrix(inst, g, 0.03);
    CHECK(max_abs_diff(m.A, transpose(m.A)) == 0.0);
  }
  SUBCASE("negative kappa_dt rejected") {
    double g = 0.0;
    CHECK_THROWS_AS(build_matmul_matrix(inst, std::span<const double>(&g, 1), -0.1),
                    ArgumentError);
  }
}

TEST_CASE("matmul step matrix shares eigenvectors with J under uniform gain") {
  Instance inst = gaussian_instance(8, 11);
  auto eig = jacobi_eigen(inst.J, 1e-12);
  double g = 0.7;
  const double kdt = 0.05;
  auto m = build_matmul_matrix(inst, std::span<const double>(&g, 1), kdt);

  for (std::size_t k = 0; k < 8; ++k) {
    std::vector<double> v(8);
    for (std::size_t i = 0; i < 8; ++i) v[i] = eig.vectors(i, k);
    auto av = matvec(m.A, v);
    double expected = 1.0 + 2.0 * kdt * g - 2.0 * kdt * eig.values[k];
    for (std::size_t i = 0; i < 8; ++i)
      CHECK(std::abs(av[i] - expected * v[i]) <= 1e-8);
  }
}

TEST_CASE("matmul_iterate basics") {
  Instance inst = gaussian_instance(4, 13);
  double g = 0.3;
  auto m = build_matmul_matrix(inst, std::span<const double>(&g, 1), 0.05);

  SUBCASE("zero steps returns the input") {
    std::vector<double> e = {1.0, -2.0, 3.0, 0.5};
    CHECK(matmul_iterate(m, e, 0, false) == e);
  }
  SUBCASE("identity map is stationary") {
    IterationMatrix ident{IterationMatrix::Kind::matmul, Mat::identity(4), 0.0, 0.0};
    std::vector<double> e = {1.0, -2.0, 3.0, 0.5};
    CHECK(matmul_iterate(ident, e, 10, false) == e);
  }
  SUBCASE("unnormalized growth eventually trips the overflow guard") {
    IterationMatrix big{IterationMatrix::Kind::matmul, Mat::identity(2), 0.0, 0.0};
    big.A(0, 0) = big.A(1, 1) = 10.0;
    std::vector<double> e = {1.0, 1.0};
    CHECK_THROWS_AS(matmul_iterate(big, e, 200, false), DivergenceError);
  }
}

TEST_CASE("normalized iteration converges to the dominant eigenvector") {
  for (std::uint64_t seed : {21, 22, 23}) {
    Instance inst = gaussian_instance(8, seed);
    double g = 1.0;
    const double kdt = 0.05;
    auto m = build_matmul_matrix(inst, std::span<const double>(&g, 1), kdt);

    Rng rng(seed + 100);
    std::vector<double> e(8);
    for (auto& v : e) v = rng.uniform(-0.01, 0.01);
    e = matmul_iterate(m, e, 1000, true);

    // dominant eigenvector of A corresponds to the smallest eigenvalue of J
    auto eig = jacobi_eigen(inst.J, 1e-12);
    std::vector<double> v(8);
    for (std::size_t i = 0; i < 8; ++i) v[i] = eig.vectors(i, 0);

    double dot = 0.0, ee = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      dot += e[i] * v[i];
      ee += e[i] * e[i];
      vv += v[i] * v[i];
    }
    double cosine = std::abs(dot) / std::sqrt(ee * vv);
    CHECK(cosine >= 1.0 - 1e-6);
  }
}

TEST_CASE("build_soljacic_matrix") {
  SUBCASE("zero coupling gives a scaled identity") {
    Instance inst = Instance::make(3);
    auto k = build_soljacic_matrix(inst, 4.0);
    CHECK(max_abs_diff(k.A, [] {
            Mat m = Mat::identity(3);
            for (auto& v : m.a) v *= 2.0;
            return m;
          }()) <= 1e-10);
  }
  SUBCASE("K K reproduces J + alpha I") {
    Instance inst = gaussian_instance(8, 31);
    double alpha = default_soljacic_alpha(inst);
    auto k = build_soljacic_matrix(inst, alpha);
    Mat target = inst.J;
    for (std::size_t i = 0; i < 8; ++i) target(i, i) += alpha;
    CHECK(max_abs_diff(matmul(k.A, k.A), target) <= 1e-8);
    CHECK(max_abs_diff(k.A, transpose(k.A)) <= 1e-10);
  }
  SUBCASE("insufficient shift reports the admissible alpha") {
    Instance inst = gaussian_instance(6, 33);
    auto eig = jacobi_eigen(inst.J, 1e-12);
    double bad_alpha = -eig.values.front() - 0.5;  // strictly below the PSD threshold
    try {
      build_soljacic_matrix(inst, bad_alpha);
      FAIL("expected NotPsdError");
    } catch (const NotPsdError& e) {
      CHECK(e.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-6));
      CHECK(e.min_alpha == doctest::Approx(-eig.values.front()).epsilon(1e-6));
    }
  }
  SUBCASE("explicit M sharing eigenvectors with J") {
    Instance inst = gaussian_instance(5, 35);
    Mat m = Mat::identity(5);
    for (auto& v : m.a) v *= 2.0;
    double alpha = default_soljacic_alpha(inst);
    auto k = build_soljacic_matrix(inst, alpha, &m);
    Mat target = inst.J;
    for (std::size_t i = 0; i < 5; ++i) target(i, i) += 2.0 * alpha;
    CHECK(max_abs_diff(matmul(k.A, k.A), target) <= 1e-8);
  }
}

TEST_CASE("soljacic_iterate") {
  SUBCASE("identity K with zero noise and the u(0)=0 rule") {
    IterationMatrix k{IterationMatrix::Kind::soljacic, Mat::identity(2), 0.0, 0.0};
    BinaryState e = {1, 0};
    auto out = soljacic_iterate(k, e, 0.0, std::uint64_t{1}, 1);
    CHECK(out == BinaryState{1, 0});  // drives (2, 0); u(0) = 0 keeps the second bit off
  }
  SUBCASE("zero-noise map is deterministic across calls") {
    Instance inst = gaussian_instance(6, 41);
    auto k = build_soljacic_matrix(inst, default_soljacic_alpha(inst));
    BinaryState e = {1, 0, 1, 1, 0, 0};
    auto a = soljacic_iterate(k, e, 0.0, std::uint64_t{7}, 50);
    auto b = soljacic_iterate(k, e, 0.0, std::uint64_t{99}, 50);
    CHECK(a == b);
  }
  SUBCASE("seeded noise is reproducible") {
    Instance inst = gaussian_instance(6, 43);
    auto k = build_soljacic_matrix(inst, default_soljacic_alpha(inst));
    BinaryState e = {0, 1, 0, 1, 0, 1};
    auto a = soljacic_iterate(k, e, 0.5, std::uint64_t{11}, 200);
    auto b = soljacic_iterate(k, e, 0.5, std::uint64_t{11}, 200);
    CHECK(a == b);
    auto c = soljacic_iterate(k, e, 0.5, std::uint64_t{12}, 200);
    // different stream; states may coincide by chance on tiny instances,
    // so only check that the call ran
    CHECK(c.size() == e.size());
  }
  SUBCASE("merit is non-increasing on a majority of low-noise steps") {
    Instance inst = gaussian_instance(8, 47);
    auto k = build_soljacic_matrix(inst, default_soljacic_alpha(inst));
    Rng rng(48);
    BinaryState e(8);
    for (auto& b : e) b = rng.bernoulli(0.5) ? 1 : 0;

    int down = 0, up = 0;
    double merit = soljacic_merit(k, e);
    for (int step = 0; step < 1000; ++step) {
      e = soljacic_iterate(k, std::move(e), 0.01, rng, 1);
      double next = soljacic_merit(k, e);
      if (next <= merit + 1e-12)
        ++down;
      else
        ++up;
      merit = next;
    }
    CHECK(down > up);
  }
}

TEST_CASE("zero-noise trajectories enter a cycle within 2^n steps") {
  for (std::uint64_t seed : {51, 52, 53}) {
    std::size_t n = 8;
    Instance inst = gaussian_instance(n, seed);
    auto k = build_soljacic_matrix(inst, default_soljacic_alpha(inst));
    Rng rng(seed);
    BinaryState e(n);
    for (auto& b : e) b = rng.bernoulli(0.5) ? 1 : 0;

    std::set<BinaryState> visited;
    bool cycled = false;
    for (std::uint64_t step = 0; step < (1ull << n); ++step) {
      if (!visited.insert(e).second) {
        cycled = true;
        break;
      }
      e = soljacic_iterate(k, std::move(e), 0.0, std::uint64_t{0}, 1);
    }
    // after at most 2^n distinct states the map must revisit one
    if (!cycled) cycled = visited.count(e) > 0;
    CHECK(cycled);
  }
}

TEST_CASE("binary_to_spins") {
  CHECK(binary_to_spins({1, 0}) == SpinConfig{1, -1});
  CHECK(binary_to_spins({1, 1, 1}) == SpinConfig{1, 1, 1});
  // round-trip with e = (s + 1) / 2
  BinaryState e = {0, 1, 1, 0, 1};
  auto s = binary_to_spins(e);
  BinaryState back(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) back[i] = static_cast<std::uint8_t>((s[i] + 1) / 2);
  CHECK(back == e);
}
