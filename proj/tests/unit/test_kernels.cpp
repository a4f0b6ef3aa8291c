#include <doctest.h>

#include "support/fixtures.hpp"
#include "tvsync/kernels.hpp"

using namespace tvsync;

TEST_CASE("matmul matches a reference triple loop") {
  Rng rng(1);
  const Matrix a = fixtures::random_matrix(rng, 7, 5), b = fixtures::random_matrix(rng, 5, 9);
  Matrix out;
  kernels::serial::matmul(a, b, out);
  CHECK(max_abs_diff(out, a * b) < 1e-14);
  const Eigen::MatrixXd ref = fixtures::to_eigen(a) * fixtures::to_eigen(b);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 9; ++j) CHECK(std::abs(out(i, j) - ref(i, j)) < 1e-14);
}

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
  Rng rng(2);
  for (std::size_t n : {1u, 3u, 64u, 300u}) {
    const Matrix a = fixtures::random_matrix(rng, n, n), b = fixtures::random_matrix(rng, n, n);
    Matrix s, p;
    kernels::serial::matmul(a, b, s);
    kernels::omp::matmul(a, b, p);
    CHECK(s == p);
    kernels::matmul(a, b, p);
    CHECK(s == p);

    kernels::serial::deviation_step(a, b, s);
    kernels::omp::deviation_step(a, b, p);
    CHECK(s == p);

    std::vector<double> x(n), ys(n), yp(n);
    for (double& v : x) v = rng.uniform();
    kernels::serial::matvec(a, x, ys);
    kernels::omp::matvec(a, x, yp);
    CHECK(ys == yp);
    kernels::serial::anchored_matvec(a, x, ys);
    kernels::omp::anchored_matvec(a, x, yp);
    CHECK(ys == yp);
    kernels::anchored_matvec(a, x, yp);
    CHECK(ys == yp);
  }
}

TEST_CASE("deviation step subtracts row zero") {
  const Matrix g{{0.5, 0.5}, {0.25, 0.75}};
  const Matrix e{{1, 2}, {3, 4}};
  Matrix out;
  kernels::serial::deviation_step(g, e, out);
  const Matrix ge = g * e;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(out(i, j) == doctest::Approx(ge(i, j) - ge(0, j)));
  CHECK(out(0, 0) == 0.0);
  CHECK(out(0, 1) == 0.0);
}

TEST_CASE("anchored matvec keeps equal states exactly equal") {
  Rng rng(4);
  const auto g = fixtures::random_stochastic(rng, 50);
  std::vector<double> y(50, 0.123456789), out(50);
  kernels::anchored_matvec(g, y, out);
  for (double v : out) CHECK(v == 0.123456789);
  for (double& v : y) v = rng.uniform();
  kernels::anchored_matvec(g, y, out);
  const auto ref = g.matrix() * std::span<const double>(y);
  for (std::size_t i = 0; i < 50; ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}

TEST_CASE("thread count is positive") { CHECK(kernels::max_threads() >= 1); }
