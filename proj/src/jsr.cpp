#include "tvsync/jsr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

#include "tvsync/kernels.hpp"

namespace tvsync {

namespace {

std::size_t validate_set(const std::vector<Matrix>& set) {
  if (set.empty()) throw Error(ErrorKind::EmptySet, "matrix set is empty");
  const std::size_t n = set.front().rows();
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (!set[k].square() || set[k].rows() != n || n == 0) {
      throw Error(ErrorKind::DimensionMismatch, "member " + std::to_string(k) + " is not " +
                                                    std::to_string(n) + "x" + std::to_string(n));
    }
  }
  return n;
}

double root_of(double x, std::size_t len) {
  return x <= 0.0 ? 0.0 : std::exp(std::log(x) / static_cast<double>(len));
}

Matrix word_product(const std::vector<Matrix>& set, const std::vector<std::size_t>& word) {
  Matrix p = set[word.front()];
  for (std::size_t k = 1; k < word.size(); ++k) p = set[word[k]] * p;
  return p;
}

// Osborne iteration on S = sum |A_i|: D^-1 S D gets matching row and column
// sums. Returns the diagonal of D.
std::vector<double> balancing_diagonal(const std::vector<Matrix>& set) {
  const std::size_t n = set.front().rows();
  Matrix s(n, n);
  for (const auto& a : set)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) += std::abs(a(i, j));
  std::vector<double> d(n, 1.0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        row += s(k, j) * d[j] / d[k];
        col += s(j, k) * d[k] / d[j];
      }
      if (row == 0.0 || col == 0.0) continue;
      const double f = std::sqrt(row / col);
      if (std::abs(f - 1.0) > 1e-3) {
        d[k] *= f;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d;
}

struct ShortWord {
  double radius = 0.0;
  std::vector<std::size_t> word;
};

// Best rho(A_w)^(1/|w|) over the shortest words, at most `budget` products.
ShortWord best_short_word(const std::vector<Matrix>& set, std::size_t budget) {
  struct Item {
    std::vector<std::size_t> word;
    Matrix product;
  };
  std::vector<Item> layer{{{}, Matrix::identity(set.front().rows())}}, next;
  ShortWord best;
  std::size_t used = 0;
  while (used + layer.size() * set.size() <= budget) {
    next.clear();
    for (const auto& item : layer) {
      for (std::size_t k = 0; k < set.size(); ++k) {
        Item child{item.word, set[k] * item.product};
        child.word.push_back(k);
        const double r = root_of(spectral_radius(child.product), child.word.size());
        if (best.word.empty() || r > best.radius * (1.0 + 1e-12)) best = {r, child.word};
        next.push_back(std::move(child));
      }
    }
    used += next.size();
    std::swap(layer, next);
  }
  return best;
}

struct Similarity {
  Matrix t;
  Matrix t_inv;
};

// T = V^-1 with V the real eigenbasis of `p` (real and imaginary parts for
// complex pairs). In the norm |T x|_2 the map p has norm rho(p).
struct Block {
  std::size_t start;
  std::size_t size;
};

std::optional<Similarity> eigenbasis_similarity(const Matrix& p, std::vector<Block>& blocks) {
  const auto n = static_cast<Eigen::Index>(p.rows());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = p(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) return std::nullopt;
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  Eigen::MatrixXd v(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (vals(j).imag() == 0.0) {
      v.col(j) = vecs.col(j).real().normalized();
    } else if (vals(j).imag() > 0.0 && j + 1 < n) {
      const double scale = vecs.col(j).norm();
      v.col(j) = vecs.col(j).real() / scale;
      v.col(j + 1) = vecs.col(j).imag() / scale;
      ++j;
    } else {
      return std::nullopt;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& sv = svd.singularValues();
  if (!(sv(n - 1) > 1e-8 * sv(0))) return std::nullopt;
  const Eigen::MatrixXd vinv = v.inverse();
  blocks.clear();
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool pair = vals(j).imag() > 0.0;
    blocks.push_back({static_cast<std::size_t>(j), pair ? 2u : 1u});
    if (pair) ++j;
  }
  Similarity out{Matrix(p.rows(), p.rows()), Matrix(p.rows(), p.rows())};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.t(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = vinv(i, j);
      out.t_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v(i, j);
    }
  }
  return out;
}

// Scaling each eigen-block of T keeps the witness norm at rho; choose the
// scales that minimize the worst normalized norm over words up to length 3.
Similarity tune_block_scales(const std::vector<Matrix>& set, Similarity sim,
                             const std::vector<Block>& blocks) {
  if (blocks.size() < 2) return sim;
  std::vector<std::vector<std::size_t>> words;
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::size_t> w(len, 0);
    while (true) {
      words.push_back(w);
      std::size_t d = 0;
      while (d < len && ++w[d] == set.size()) w[d++] = 0;
      if (d == len) break;
    }
    if (words.size() > 512) break;
  }
  std::vector<Matrix> products;
  for (const auto& w : words) products.push_back(word_product(set, w));

  std::vector<double> log_scale(blocks.size(), 0.0);
  auto scaled = [&](const std::vector<double>& ls) {
    Similarity out = sim;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double f = std::exp(ls[b]);
      for (std::size_t r = blocks[b].start; r < blocks[b].start + blocks[b].size; ++r) {
        for (std::size_t c = 0; c < out.t.cols(); ++c) {
          out.t(r, c) *= f;
          out.t_inv(c, r) /= f;
        }
      }
    }
    return out;
  };
  auto cost = [&](const std::vector<double>& ls) {
    const Similarity s = scaled(ls);
    double worst = 0.0;
    for (std::size_t k = 0; k < products.size(); ++k) {
      worst = std::max(worst, root_of(matrix_norm(s.t * products[k] * s.t_inv, NormKind::Two),
                                      words[k].size()));
    }
    return worst;
  };
  double best = cost(log_scale);
  for (double step = 2.0; step > 1e-3; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t b = 1; b < blocks.size(); ++b) {
        for (double dir : {step, -step}) {
          auto trial = log_scale;
          trial[b] += dir;
          const double c = cost(trial);
          if (c < best) {
            best = c;
            log_scale = std::move(trial);
            improved = true;
          }
        }
      }
    }
  }
  return scaled(log_scale);
}

// Nelder-Mead over the entries of T (T_00 pinned to its start value), to
// minimize the worst |T A_w T^-1|_2^(1/K) over all words of one length K.
std::optional<Similarity> optimize_similarity(const std::vector<Matrix>& set, const Similarity& start) {
  const std::size_t n = set.front().rows();
  std::size_t len = 1;
  double count = static_cast<double>(set.size());
  while (count * static_cast<double>(set.size()) <= 256.0 && len < 12) {
    count *= static_cast<double>(set.size());
    ++len;
  }
  std::vector<Matrix> products;
  {
    std::vector<Matrix> layer{Matrix::identity(n)}, next;
    for (std::size_t l = 0; l < len; ++l) {
      next.clear();
      for (const auto& p : layer)
        for (const auto& a : set) next.push_back(a * p);
      std::swap(layer, next);
    }
    products = std::move(layer);
  }
  const std::size_t dim = n * n - 1;
  auto unpack = [&](const std::vector<double>& x) {
    Matrix t = start.t;
    for (std::size_t k = 0; k < dim; ++k) t.data()[k + 1] = x[k];
    return t;
  };
  auto inverse = [&](const Matrix& t) -> std::optional<Matrix> {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t(i, j);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::MatrixXd inv = lu.inverse();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
  };
  auto cost = [&](const std::vector<double>& x) {
    const Matrix t = unpack(x);
    const auto t_inv = inverse(t);
    if (!t_inv) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& p : products) worst = std::max(worst, matrix_norm(t * p * *t_inv, NormKind::Two));
    return root_of(worst, len);
  };

  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(start.t.data().begin() + 1, start.t.data().end()));
  const double base = start.t.max_abs();
  for (std::size_t k = 0; k < dim; ++k) simplex[k + 1][k] += 0.1 * base;
  std::vector<double> f(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k) f[k] = cost(simplex[k]);
  const std::size_t max_evals = 400 * (dim + 1);
  std::size_t evals = dim + 1;
  std::vector<std::size_t> order(dim + 1);
  while (evals < max_evals) {
    for (std::size_t k = 0; k <= dim; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
    if (f[worst] - f[best] <= 1e-12 * std::max(1.0, f[best])) break;
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k <= dim; ++k)
      if (k != worst)
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[k][d] / static_cast<double>(dim);
    auto along = [&](double c) {
      std::vector<double> x(dim);
      for (std::size_t d = 0; d < dim; ++d) x[d] = centroid[d] + c * (simplex[worst][d] - centroid[d]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = cost(xr);
    ++evals;
    if (fr < f[best]) {
      auto xe = along(-2.0);
      const double fe = cost(xe);
      ++evals;
      if (fe < fr) {
        simplex[worst] = std::move(xe);
        f[worst] = fe;
      } else {
        simplex[worst] = std::move(xr);
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      simplex[worst] = std::move(xr);
      f[worst] = fr;
    } else {
      auto xc = along(fr < f[worst] ? -0.5 : 0.5);
      const double fc = cost(xc);
      ++evals;
      if (fc < std::min(fr, f[worst])) {
        simplex[worst] = std::move(xc);
        f[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= dim; ++k) {
          if (k == best) continue;
          for (std::size_t d = 0; d < dim; ++d) simplex[k][d] = simplex[best][d] + 0.5 * (simplex[k][d] - simplex[best][d]);
          f[k] = cost(simplex[k]);
          ++evals;
        }
      }
    }
  }
  const std::size_t best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  if (!std::isfinite(f[best])) return std::nullopt;
  const Matrix t = unpack(simplex[best]);
  return Similarity{t, *inverse(t)};
}

// Symmetric convex polygon in the plane, vertices counter-clockwise; its
// gauge is a norm on R^2.
class PlaneBall {
 public:
  using Point = std::array<double, 2>;

  explicit PlaneBall(std::vector<Point> points) {
    const std::size_t count = points.size();
    for (std::size_t k = 0; k < count; ++k) points.push_back({-points[k][0], -points[k][1]});
    vertices_ = hull(std::move(points));
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
      const Point& a = vertices_[k];
      const Point& b = vertices_[(k + 1) % vertices_.size()];
      const double c = a[0] * b[1] - a[1] * b[0];
      facets_.push_back({(b[1] - a[1]) / c, -(b[0] - a[0]) / c});
    }
  }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }

  /// Interior around the origin (at least a triangle with positive area).
  bool solid() const {
    if (vertices_.size() < 3) return false;
    double area = 0.0, radius = 0.0;
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
      const Point& a = vertices_[k];
      const Point& b = vertices_[(k + 1) % vertices_.size()];
      area += a[0] * b[1] - a[1] * b[0];
      radius = std::max(radius, std::hypot(a[0], a[1]));
    }
    return area > 1e-10 * radius * radius;
  }

  double gauge(double x, double y) const {
    double g = 0.0;
    for (const auto& f : facets_) g = std::max(g, f[0] * x + f[1] * y);
    return g;
  }

  double operator_norm(const Matrix& m) const {
    double best = 0.0;
    for (const auto& v : vertices_) {
      best = std::max(best, gauge(m(0, 0) * v[0] + m(0, 1) * v[1], m(1, 0) * v[0] + m(1, 1) * v[1]));
    }
    return best;
  }

 private:
  static std::vector<Point> hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const Point& o, const Point& a, const Point& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
      while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
      h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
      while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
      h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
  }

  std::vector<Point> vertices_;
  std::vector<Point> facets_;
};

// Approximates an invariant body of {A_i / gamma}: start from the witness's
// leading eigenvector (or its rotation ellipse) and keep adding images of
// the vertices until the hull stops growing.
std::optional<PlaneBall> extremal_polygon(const std::vector<Matrix>& set, const Matrix& witness,
                                          double gamma) {
  Eigen::Matrix2d w;
  w << witness(0, 0), witness(0, 1), witness(1, 0), witness(1, 1);
  Eigen::EigenSolver<Eigen::Matrix2d> es(w);
  if (es.info() != Eigen::Success) return std::nullopt;
  std::vector<PlaneBall::Point> pts;
  const auto vals = es.eigenvalues();
  const auto vecs = es.eigenvectors();
  if (vals(0).imag() == 0.0) {
    const int k = std::abs(vals(0)) >= std::abs(vals(1)) ? 0 : 1;
    const Eigen::Vector2d v = vecs.col(k).real().normalized();
    pts.push_back({v(0), v(1)});
  } else {
    const Eigen::Vector2d re = vecs.col(0).real(), im = vecs.col(0).imag();
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * 3.141592653589793 * k / 64.0;
      const Eigen::Vector2d p = std::cos(th) * re + std::sin(th) * im;
      pts.push_back({p(0), p(1)});
    }
  }
  PlaneBall ball(pts);
  for (int round = 0; round < 200; ++round) {
    std::vector<PlaneBall::Point> next = ball.vertices();
    const std::size_t before = next.size();
    for (std::size_t k = 0; k < before; ++k) {
      const auto v = next[k];
      for (const auto& a : set) {
        next.push_back({(a(0, 0) * v[0] + a(0, 1) * v[1]) / gamma, (a(1, 0) * v[0] + a(1, 1) * v[1]) / gamma});
      }
    }
    PlaneBall grown(std::move(next));
    const bool stable = grown.vertices() == ball.vertices();
    ball = std::move(grown);
    if (stable || ball.vertices().size() > 400) break;
  }
  if (!ball.solid()) {
    // fatten a flat body so the gauge is a norm
    double radius = 0.0;
    for (const auto& v : ball.vertices()) radius = std::max(radius, std::hypot(v[0], v[1]));
    if (radius == 0.0) return std::nullopt;
    std::vector<PlaneBall::Point> fat = ball.vertices();
    fat.push_back({1e-3 * radius, 0.0});
    fat.push_back({0.0, 1e-3 * radius});
    ball = PlaneBall(std::move(fat));
    if (!ball.solid()) return std::nullopt;
  }
  return ball;
}

struct Node {
  double bound;
  std::vector<std::size_t> word;
  Matrix product;
};

struct Lower {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.word > b.word;  // lexicographically smaller words first
  }
};

using Measure = std::function<double(const Matrix&)>;

Measure matrix_measure(NormKind kind) {
  return [kind](const Matrix& m) { return matrix_norm(m, kind); };
}

JsrBounds branch_and_bound(const std::vector<Matrix>& work, const Measure& measure,
                           const GripenbergOptions& options, JsrBounds seed) {
  const std::size_t n = work.front().rows();
  JsrBounds out = std::move(seed);
  std::priority_queue<Node, std::vector<Node>, Lower> frontier;
  auto consider = [&](const Matrix& p, const std::vector<std::size_t>& word) {
    const double r = root_of(spectral_radius(p), word.size());
    if (r > out.lower || out.witness.empty()) {
      out.lower = std::max(out.lower, r);
      out.witness = word;
    }
    ++out.node_count;
    out.depth_reached = std::max(out.depth_reached, word.size());
  };

  for (std::size_t k = 0; k < work.size(); ++k) {
    std::vector<std::size_t> word{k};
    consider(work[k], word);
    frontier.push({measure(work[k]), std::move(word), work[k]});
  }

  double leaf_max = 0.0;
  bool exhausted = false;
  Matrix child(n, n);
  while (!frontier.empty()) {
    if (frontier.top().bound <= out.lower + options.tol) {
      leaf_max = std::max(leaf_max, frontier.top().bound);
      break;
    }
    if (out.node_count >= options.node_budget) {
      leaf_max = std::max(leaf_max, frontier.top().bound);
      exhausted = true;
      break;
    }
    Node node = frontier.top();
    frontier.pop();
    if (node.word.size() >= options.max_len) {
      leaf_max = std::max(leaf_max, node.bound);
      exhausted = true;
      continue;
    }
    for (std::size_t k = 0; k < work.size(); ++k) {
      kernels::serial::matmul(work[k], node.product, child);
      std::vector<std::size_t> word = node.word;
      word.push_back(k);
      consider(child, word);
      const double bound = std::min(node.bound, root_of(measure(child), word.size()));
      frontier.push({bound, std::move(word), child});
    }
  }
  out.upper = std::max(out.lower, leaf_max);
  out.converged = !exhausted && out.upper - out.lower <= options.tol;
  return out;
}

std::vector<Matrix> transform(const std::vector<Matrix>& set, const Similarity& s) {
  std::vector<Matrix> out;
  out.reserve(set.size());
  for (const auto& a : set) out.push_back(s.t * a * s.t_inv);
  return out;
}

}  // namespace

PruneNorm parse_prune_norm(const std::string& s) {
  if (s == "inf") return PruneNorm::Inf;
  if (s == "balanced") return PruneNorm::Balanced;
  if (s == "ellipsoidal") return PruneNorm::Ellipsoidal;
  throw Error(ErrorKind::InvalidConfig, "unknown prune norm '" + s + "'");
}

std::string to_string(PruneNorm p) {
  switch (p) {
    case PruneNorm::Inf: return "inf";
    case PruneNorm::Balanced: return "balanced";
    case PruneNorm::Ellipsoidal: return "ellipsoidal";
  }
  return "inf";
}

JsrBounds gripenberg(const std::vector<Matrix>& set, const GripenbergOptions& options) {
  const std::size_t n = validate_set(set);
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidParams, "tol must be > 0");
  if (options.max_len < 1) throw Error(ErrorKind::InvalidParams, "max_len must be >= 1");

  std::vector<Matrix> balanced = set;
  if (n > 1) {
    const auto d = balancing_diagonal(set);
    for (auto& a : balanced)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= d[j] / d[i];
  }

  switch (options.norm) {
    case PruneNorm::Inf:
      return branch_and_bound(set, matrix_measure(NormKind::Inf), options, {});
    case PruneNorm::Balanced:
      return branch_and_bound(balanced, matrix_measure(NormKind::Inf), options, {});
    case PruneNorm::Ellipsoidal:
      break;
  }

  // Lower bound from short words first; its witness fixes the similarity.
  const ShortWord shortw = best_short_word(set, 4096);
  JsrBounds seed;
  seed.lower = shortw.radius;
  seed.witness = shortw.word;
  seed.depth_reached = shortw.word.size();

  // Candidate norms, cheapest and most specific first; built on demand.
  using Candidate = std::optional<std::pair<std::vector<Matrix>, Measure>>;
  const Matrix witness = word_product(set, shortw.word);
  std::vector<Block> blocks;
  const auto sim = eigenbasis_similarity(witness, blocks);
  std::optional<Similarity> tuned;
  std::vector<std::function<Candidate()>> candidates;
  if (n == 2 && shortw.radius > 0.0) {
    candidates.emplace_back([&]() -> Candidate {
      auto ball = extremal_polygon(set, witness, shortw.radius * (1.0 + 1e-9));
      if (!ball) return std::nullopt;
      return std::pair{set, Measure([b = std::move(*ball)](const Matrix& m) { return b.operator_norm(m); })};
    });
  }
  if (sim) {
    candidates.emplace_back([&]() -> Candidate {
      return std::pair{transform(set, *sim), matrix_measure(NormKind::Two)};
    });
    candidates.emplace_back([&]() -> Candidate {
      tuned = tune_block_scales(set, *sim, blocks);
      return std::pair{transform(set, *tuned), matrix_measure(NormKind::Two)};
    });
    candidates.emplace_back([&]() -> Candidate {
      auto opt = optimize_similarity(set, tuned ? *tuned : *sim);
      if (!opt) return std::nullopt;
      return std::pair{transform(set, *opt), matrix_measure(NormKind::Two)};
    });
  }
  candidates.emplace_back([&]() -> Candidate { return std::pair{balanced, matrix_measure(NormKind::Inf)}; });

  // Each candidate norm yields a valid bracket; keep the tighter ends.
  JsrBounds best;
  bool first = true;
  for (const auto& build : candidates) {
    const Candidate c = build();
    if (!c) continue;
    JsrBounds b = branch_and_bound(c->first, c->second, options, seed);
    if (first) {
      best = std::move(b);
      first = false;
    } else {
      if (b.lower > best.lower) {
        best.lower = b.lower;
        best.witness = b.witness;
      }
      best.upper = std::min(best.upper, b.upper);
      best.node_count += b.node_count;
      best.depth_reached = std::max(best.depth_reached, b.depth_reached);
    }
    best.upper = std::max(best.upper, best.lower);
    best.converged = best.upper - best.lower <= options.tol;
    if (best.converged) break;
  }
  return best;
}

double brute_force_jsr(const std::vector<Matrix>& set, std::size_t max_len) {
  const std::size_t n = validate_set(set);
  if (max_len < 1) throw Error(ErrorKind::InvalidParams, "max_len must be >= 1");
  constexpr double kBudget = 1e7;
  double words = 0.0, layer = 1.0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    layer *= static_cast<double>(set.size());
    words += layer;
    if (words > kBudget) {
      throw Error(ErrorKind::BudgetExceeded, std::to_string(set.size()) + "^" + std::to_string(max_len) +
                                                 " words exceed the 1e7 budget");
    }
  }
  // depth-first over words, one product buffer per level
  std::vector<Matrix> stack(max_len + 1, Matrix(n, n));
  stack[0] = Matrix::identity(n);
  std::vector<std::size_t> digit(max_len + 1, 0);
  double best = 0.0;
  std::size_t depth = 1;
  while (depth > 0) {
    if (digit[depth] == set.size()) {
      --depth;
      if (depth > 0) ++digit[depth];
      continue;
    }
    kernels::serial::matmul(set[digit[depth]], stack[depth - 1], stack[depth]);
    best = std::max(best, root_of(spectral_radius(stack[depth]), depth));
    if (depth < max_len) {
      ++depth;
      digit[depth] = 0;
    } else {
      ++digit[depth];
    }
  }
  return best;
}

std::vector<Matrix> project_set(const std::vector<StochasticMatrix>& set, const ProjectionBasis& basis) {
  std::vector<Matrix> out;
  out.reserve(set.size());
  for (const auto& g : set) out.push_back(project(g.matrix(), basis));
  return out;
}

}  // namespace tvsync
