#include <doctest.h>

#include <algorithm>

#include "support/fixtures.hpp"
#include "tvsync/hajnal.hpp"

using namespace tvsync;

namespace {

// eta by its definition, independent of the library
double eta_direct(const Matrix& g) {
  double best = 1.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = i + 1; j < g.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < g.cols(); ++k) s += std::min(g(i, k), g(j, k));
      best = std::min(best, s);
    }
  return best;
}

const Matrix kCyclic{{.5, .5, 0}, {0, .5, .5}, {.5, 0, .5}};

}  // namespace

TEST_CASE("diam examples") {
  CHECK(diam_matrix(Matrix{{0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}}).value == 0.0);
  CHECK(diam_matrix(Matrix::identity(2), NormKind::Inf).value == 1.0);
  CHECK(diam_matrix(Matrix::identity(2), NormKind::One).value == 2.0);
  CHECK(diam_matrix(Matrix::identity(2), NormKind::Two).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(diam_matrix(Matrix::identity(2), NormKind::One).norm_kind == NormKind::One);
  // column vector: state diameter
  CHECK(diam_matrix(Matrix{{0.1}, {0.7}, {0.4}}).value == doctest::Approx(0.6));
}

TEST_CASE("eta examples") {
  CHECK(eta(make_stochastic(Matrix::identity(4))) == 0.0);
  CHECK(eta(make_stochastic(Matrix{{0.3, 0.7}, {0.3, 0.7}})) == doctest::Approx(1.0));
  CHECK(eta(make_stochastic(kCyclic)) == doctest::Approx(0.5));
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = fixtures::random_stochastic(rng, 2 + rng.below(6), 0.5);
    CHECK(eta(g) == doctest::Approx(eta_direct(g.matrix())).epsilon(1e-12));
  }
}

TEST_CASE("scrambling predicate") {
  CHECK(is_scrambling(make_stochastic(Matrix{{0.5, 0.5, 0}, {1, 0, 0}, {0.2, 0, 0.8}})));
  CHECK_FALSE(is_scrambling(make_stochastic(Matrix::identity(3))));
  CHECK(is_scrambling(make_stochastic(kCyclic)));
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = fixtures::random_stochastic(rng, 2 + rng.below(6), 0.6);
    CHECK(is_scrambling(g) == (eta_direct(g.matrix()) > 0.0));
  }
}

TEST_CASE("Hajnal inequality examples") {
  const auto rank_one = make_stochastic(Matrix{{0.1, 0.9}, {0.1, 0.9}});
  const auto h = make_stochastic(Matrix{{0.6, 0.4}, {0.2, 0.8}});
  auto c = hajnal_bound_check(rank_one, h);
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == doctest::Approx(0.0));
  CHECK(c.holds);

  const auto id = make_stochastic(Matrix::identity(2));
  c = hajnal_bound_check(id, id, NormKind::Inf);
  CHECK(c.lhs == 1.0);
  CHECK(c.rhs == 1.0);
  CHECK(c.holds);

  CHECK_THROWS_AS(hajnal_bound_check(id, make_stochastic(Matrix::identity(3))), Error);
}

TEST_CASE("Hajnal inequality on random pairs") {
  Rng rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + rng.below(7);
    const auto g = fixtures::random_stochastic(rng, m, rng.uniform(0.0, 0.8));
    const auto h = fixtures::random_stochastic(rng, m, rng.uniform(0.0, 0.8));
    for (auto kind : {NormKind::Inf, NormKind::One, NormKind::Two}) {
      const auto c = hajnal_bound_check(g, h, kind);
      CHECK(c.holds);
      CHECK(c.lhs <= c.rhs + 1e-10);
    }
  }
}
