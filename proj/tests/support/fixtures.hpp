#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "tvsync/digraph.hpp"
#include "tvsync/matrix.hpp"
#include "tvsync/rng.hpp"

namespace fixtures {

using tvsync::Matrix;
using tvsync::Rng;
using tvsync::StochasticMatrix;

inline Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

/// Eigenvalue moduli, largest first.
inline std::vector<double> eigen_moduli(const Matrix& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(a), false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline double eigen_spectral_radius(const Matrix& a) { return eigen_moduli(a).front(); }

/// Second largest eigenvalue modulus of a stochastic matrix: the trivial
/// eigenvalue 1 (row sums) is removed once.
inline double second_eigen_modulus(const Matrix& g) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(g), false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  auto one = std::min_element(ev.begin(), ev.end(), [](auto a, auto b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  ev.erase(one);
  double best = 0.0;
  for (auto v : ev) best = std::max(best, std::abs(v));
  return best;
}

/// Dense random stochastic matrix with optional zero entries.
inline StochasticMatrix random_stochastic(Rng& rng, std::size_t m, double zero_prob = 0.0,
                                          bool positive_diag = false) {
  Matrix a(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.uniform() < zero_prob ? 0.0 : rng.uniform();
    if (positive_diag) a(i, i) = 0.1 + rng.uniform();
    double s = 0.0;
    for (double v : a.row(i)) s += v;
    if (s == 0.0) a(i, rng.below(m)) = 1.0;
  }
  return tvsync::make_stochastic(a);
}

/// Random stochastic matrix whose graph has a spanning tree: a random
/// rooted tree plus sparse extra edges, positive diagonal if requested.
inline StochasticMatrix random_spanning_tree_stochastic(Rng& rng, std::size_t m, double extra = 0.2,
                                                        bool positive_diag = true) {
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  Matrix a(m, m);
  for (std::size_t k = 1; k < m; ++k) {
    const std::size_t parent = order[rng.below(k)];
    a(order[k], parent) = 0.2 + rng.uniform();
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && rng.uniform() < extra) a(i, j) = std::max(a(i, j), rng.uniform());
  for (std::size_t i = 0; i < m; ++i) {
    if (positive_diag) a(i, i) = 0.2 + rng.uniform();
    double s = 0.0;
    for (double v : a.row(i)) s += v;
    if (s == 0.0) a(i, i) = 1.0;
  }
  return tvsync::make_stochastic(a);
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                            double hi = 1.0) {
  Matrix a(rows, cols);
  for (double& v : a.data()) v = rng.uniform(lo, hi);
  return a;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fixtures
