#include "tvsync/hajnal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tvsync {

DiamValue diam_matrix(const Matrix& l, NormKind kind) {
  DiamValue out{0.0, kind};
  const std::size_t n = l.rows();
  if (l.cols() == 1) {
    if (n == 0) return out;
    const auto col = l.data();
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    out.value = *hi - *lo;
    return out;
  }
  std::vector<double> diff(l.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto a = l.row(i);
      auto b = l.row(j);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = a[k] - b[k];
      out.value = std::max(out.value, vector_norm(diff, kind));
    }
  }
  return out;
}

double eta(const StochasticMatrix& g) {
  const std::size_t m = g.dim();
  double best = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double v = std::min(g(i, k), g(j, k));
        if (v > kPositiveThreshold) s += v;
      }
      best = std::min(best, s);
    }
  }
  return best;
}

bool is_scrambling(const StochasticMatrix& g) {
  const std::size_t m = g.dim();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      bool shared = false;
      for (std::size_t k = 0; k < m && !shared; ++k) {
        shared = g(i, k) > kPositiveThreshold && g(j, k) > kPositiveThreshold;
      }
      if (!shared) return false;
    }
  }
  return true;
}

HajnalCheck hajnal_bound_check(const StochasticMatrix& g, const StochasticMatrix& h,
                               NormKind kind) {
  if (g.dim() != h.dim()) throw Error(ErrorKind::DimensionMismatch, "G and H differ in size");
  HajnalCheck c;
  c.lhs = diam_matrix(g.matrix() * h.matrix(), kind).value;
  c.rhs = (1.0 - eta(g)) * diam_matrix(h.matrix(), kind).value;
  c.holds = c.lhs <= c.rhs + 1e-10;
  return c;
}

}  // namespace tvsync
