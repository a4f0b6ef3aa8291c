#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "tvsync/matrix.hpp"

using namespace tvsync;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("make_stochastic normalizes rows") {
  const auto g = make_stochastic(Matrix{{2, 2}, {0, 4}});
  CHECK(g.matrix() == Matrix{{0.5, 0.5}, {0, 1}});
  CHECK(make_stochastic(Matrix::identity(3)).matrix() == Matrix::identity(3));
}

TEST_CASE("make_stochastic errors") {
  CHECK(kind_of([] { make_stochastic(Matrix{{0, 0}, {1, 1}}); }) == ErrorKind::ZeroRow);
  CHECK(kind_of([] { make_stochastic(Matrix{{1, -1}, {1, 1}}); }) == ErrorKind::NegativeEntry);
  CHECK(kind_of([] { make_stochastic(Matrix(2, 3, 1.0)); }) == ErrorKind::NotSquare);
  CHECK(kind_of([] { Matrix{{1, NAN}}; }) == ErrorKind::NonFinite);
}

TEST_CASE("make_stochastic is exactly idempotent") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.below(9);
    const auto once = make_stochastic(fixtures::random_matrix(rng, m, m, 0.0, 3.0));
    const auto twice = make_stochastic(once.matrix());
    CHECK(once == twice);
  }
}

TEST_CASE("validated rejects non-stochastic input") {
  CHECK(kind_of([] { StochasticMatrix::validated(Matrix{{0.5, 0.6}, {0, 1}}); }) ==
        ErrorKind::NotStochastic);
  CHECK_NOTHROW(StochasticMatrix::validated(Matrix{{0.5, 0.5 + 1e-9}, {0, 1}}, 1e-8));
}

TEST_CASE("projection bases") {
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(projection_basis(2, BasisKind::Difference).P == Matrix{{1, -1}});
  CHECK(projection_basis(3, BasisKind::Difference).P == Matrix{{1, -1, 0}, {0, 1, -1}});
  CHECK(max_abs_diff(projection_basis(2, BasisKind::Orthonormal).P, Matrix{{s, -s}}) < 1e-15);
  CHECK(kind_of([] { projection_basis(1, BasisKind::Difference); }) == ErrorKind::DimensionTooSmall);

  for (auto kind : {BasisKind::Difference, BasisKind::Orthonormal}) {
    for (std::size_t m : {2u, 3u, 7u}) {
      const auto b = projection_basis(m, kind);
      CHECK(max_abs_diff(b.P * b.Pplus, Matrix::identity(m - 1)) < 1e-12);
      std::vector<double> ones(m, 1.0);
      CHECK(vector_norm(b.P * std::span<const double>(ones)) < 1e-12);
    }
  }
}

TEST_CASE("project examples") {
  const auto b2 = projection_basis(2, BasisKind::Difference);
  CHECK(std::abs(project(Matrix{{0.7, 0}, {0, 0.7}}, b2)(0, 0) - 0.7) < 1e-15);

  for (auto kind : {BasisKind::Difference, BasisKind::Orthonormal}) {
    const auto b = projection_basis(4, kind);
    Matrix rank_one(4, 4);
    for (std::size_t i = 0; i < 4; ++i) rank_one.row(i)[0] = 0.1, rank_one.row(i)[1] = 0.2,
                                        rank_one.row(i)[2] = 0.3, rank_one.row(i)[3] = 0.4;
    CHECK(project(rank_one, b).max_abs() < 1e-15);
  }

  CHECK(kind_of([] { project(Matrix{{1, 0}, {0, 2}}, projection_basis(2, BasisKind::Difference)); }) ==
        ErrorKind::NotRowSumConstant);
}

TEST_CASE("projection residual and basis covariance") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.below(7);
    Matrix l = fixtures::random_matrix(rng, m, m, -2.0, 2.0);
    // force a common row sum c
    const double c = rng.uniform(-1.5, 1.5);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (double v : l.row(i)) s += v;
      l(i, m - 1) += c - s;
    }
    CHECK(std::abs(common_row_sum(l) - c) < 1e-12);
    const auto bd = projection_basis(m, BasisKind::Difference);
    const auto bo = projection_basis(m, BasisKind::Orthonormal);
    const Matrix ld = project(l, bd), lo = project(l, bo);
    const double bound = 1e-9 * std::max(1.0, matrix_norm(l));
    CHECK(matrix_norm(bd.P * l - ld * bd.P) <= bound);
    CHECK(matrix_norm(bo.P * l - lo * bo.P) <= bound);
    CHECK(std::abs(fixtures::eigen_spectral_radius(ld) - fixtures::eigen_spectral_radius(lo)) < 1e-8);
  }
}

TEST_CASE("matrix norms") {
  CHECK(matrix_norm(Matrix{{1, -1}, {0, 2}}, NormKind::Inf) == 2.0);
  CHECK(matrix_norm(Matrix{{1, -1}, {0, 2}}, NormKind::One) == 3.0);
  CHECK(std::abs(matrix_norm(Matrix::identity(5), NormKind::Two) - 1.0) < 1e-12);
  CHECK(std::abs(matrix_norm(Matrix{{3, 0}, {0, 4}}, NormKind::Two) - 4.0) < 1e-12);

  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = fixtures::random_matrix(rng, 1 + rng.below(7), 1 + rng.below(7));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(fixtures::to_eigen(a));
    CHECK(std::abs(matrix_norm(a, NormKind::Two) - svd.singularValues()(0)) < 1e-9);
  }
}

TEST_CASE("spectral radius agrees with an eigensolver") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Matrix a = fixtures::random_matrix(rng, n, n);
    const double expect = fixtures::eigen_spectral_radius(a);
    CHECK(std::abs(spectral_radius(a) - expect) <= 1e-8 * std::max(1.0, expect));
  }
  // rotation: complex dominant pair
  const double c = std::cos(0.3), s = std::sin(0.3);
  CHECK(std::abs(spectral_radius(Matrix{{0.9 * c, -0.9 * s}, {0.9 * s, 0.9 * c}}) - 0.9) < 1e-12);
  // nilpotent
  CHECK(spectral_radius(Matrix{{0, 1}, {0, 0}}) < 1e-12);
}

TEST_CASE("matrix JSON round trip") {
  const Matrix a{{1, 2, 3}, {4, 5, 6}};
  nlohmann::json j = a;
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  CHECK(j["data"] == nlohmann::json::array({1, 2, 3, 4, 5, 6}));
  CHECK(j.get<Matrix>() == a);
  nlohmann::json bad = {{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}};
  CHECK(kind_of([&] { (void)bad.get<Matrix>(); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("basis projection of a stochastic product commutes with multiplication") {
  Rng rng(3);
  const auto b = projection_basis(5, BasisKind::Orthonormal);
  const auto g = fixtures::random_stochastic(rng, 5), h = fixtures::random_stochastic(rng, 5);
  const Matrix gh = g.matrix() * h.matrix();
  CHECK(max_abs_diff(project(gh, b), project(g, b) * project(h, b)) < 1e-12);
}
