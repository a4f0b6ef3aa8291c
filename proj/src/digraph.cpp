#include "tvsync/digraph.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "tvsync/hajnal.hpp"

namespace tvsync {

std::size_t Digraph::edge_count() const noexcept {
  return static_cast<std::size_t>(std::count(in_.begin(), in_.end(), std::uint8_t{1}));
}

std::size_t Digraph::cross_edge_count() const noexcept {
  std::size_t loops = 0;
  for (std::size_t i = 0; i < m_; ++i) loops += edge(i, i) ? 1 : 0;
  return edge_count() - loops;
}

Digraph from_matrix(const Matrix& g, double threshold) {
  if (!g.square()) throw Error(ErrorKind::NotSquare, "graph source must be square");
  if (threshold < 0.0) throw Error(ErrorKind::InvalidParams, "negative threshold");
  Digraph out(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (g(i, j) > threshold) out.add_edge(j, i);
  return out;
}

Digraph graph_union(const std::vector<Digraph>& graphs) {
  if (graphs.empty()) throw Error(ErrorKind::EmptyList, "union of no graphs");
  Digraph out = graphs.front();
  const std::size_t m = out.size();
  for (const auto& g : graphs) {
    if (g.size() != m) throw Error(ErrorKind::DimensionMismatch, "union of different vertex counts");
    for (std::size_t to = 0; to < m; ++to)
      for (std::size_t from = 0; from < m; ++from)
        if (g.edge(from, to)) out.add_edge(from, to);
  }
  return out;
}

std::vector<std::size_t> strongly_connected_components(const Digraph& g, std::size_t* count) {
  // Iterative Tarjan over out-edges.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  const std::size_t m = g.size();
  std::vector<std::size_t> index(m, kUnset), low(m, 0), comp(m, kUnset);
  std::vector<std::uint8_t> on_stack(m, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next neighbour)
  std::size_t counter = 0, ncomp = 0;

  for (std::size_t root = 0; root < m; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      bool descended = false;
      while (next < m) {
        const std::size_t w = next++;
        if (w == v || !g.edge(v, w)) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::size_t done = v;
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != done);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  if (count) *count = ncomp;
  return comp;
}

std::optional<std::size_t> has_spanning_tree(const Digraph& g) {
  const std::size_t m = g.size();
  if (m == 0) return std::nullopt;
  std::size_t ncomp = 0;
  const auto comp = strongly_connected_components(g, &ncomp);
  std::vector<std::uint8_t> has_incoming(ncomp, 0);
  for (std::size_t to = 0; to < m; ++to)
    for (std::size_t from = 0; from < m; ++from)
      if (comp[from] != comp[to] && g.edge(from, to)) has_incoming[comp[to]] = 1;
  std::size_t sources = 0, source_comp = 0;
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (!has_incoming[c]) {
      ++sources;
      source_comp = c;
    }
  }
  if (sources != 1) return std::nullopt;
  for (std::size_t v = 0; v < m; ++v)
    if (comp[v] == source_comp) return v;
  return std::nullopt;
}

namespace {

std::size_t reachable_count(const Digraph& g, std::size_t root) {
  const std::size_t m = g.size();
  std::vector<std::uint8_t> seen(m, 0);
  std::vector<std::size_t> stack{root};
  seen[root] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < m; ++w) {
      if (!seen[w] && g.edge(v, w)) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

std::optional<std::size_t> has_spanning_tree_bruteforce(const Digraph& g) {
  for (std::size_t r = 0; r < g.size(); ++r)
    if (reachable_count(g, r) == g.size()) return r;
  return std::nullopt;
}

bool is_scrambling_graph(const Digraph& g) {
  const std::size_t m = g.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      bool shared = false;
      for (std::size_t k = 0; k < m && !shared; ++k) shared = g.edge(k, i) && g.edge(k, j);
      if (!shared) return false;
    }
  }
  return true;
}

bool window_has_spanning_tree(MatrixSequenceSource& source, std::size_t t0, std::size_t T,
                              WindowConvention convention, double threshold) {
  if (T < 1) throw Error(ErrorKind::InvalidParams, "window length must be >= 1");
  const std::size_t count = convention == WindowConvention::Length ? T : T + 1;
  Digraph u(source.dim());
  std::vector<Digraph> pair(2);
  for (std::size_t k = 0; k < count; ++k) {
    pair[0] = std::move(u);
    pair[1] = from_matrix(source.at(t0 + k).matrix(), threshold);
    u = graph_union(pair);
  }
  return has_spanning_tree(u).has_value();
}

bool scrambling_product_check(const std::vector<StochasticMatrix>& matrices) {
  if (matrices.empty()) throw Error(ErrorKind::EmptyList, "no matrices");
  const std::size_t m = matrices.front().dim();
  if (m < 2) throw Error(ErrorKind::PreconditionViolated, "dimension must be >= 2");
  if (matrices.size() != m - 1) {
    throw Error(ErrorKind::PreconditionViolated,
                "expected m-1=" + std::to_string(m - 1) + " matrices, got " +
                    std::to_string(matrices.size()));
  }
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    const auto& g = matrices[k];
    if (g.dim() != m) throw Error(ErrorKind::DimensionMismatch, "matrix " + std::to_string(k));
    for (std::size_t i = 0; i < m; ++i) {
      if (!(g(i, i) > 0.0)) {
        throw Error(ErrorKind::PreconditionViolated,
                    "matrix " + std::to_string(k) + ": zero diagonal at " + std::to_string(i));
      }
    }
    if (!has_spanning_tree(from_matrix(g.matrix()))) {
      throw Error(ErrorKind::PreconditionViolated,
                  "matrix " + std::to_string(k) + ": graph has no spanning tree");
    }
  }
  const Matrix p = left_product(matrices);
  return is_scrambling(StochasticMatrix::validated(p, 1e-10));
}

std::string to_edge_list(const Digraph& g) {
  std::ostringstream os;
  os << "m " << g.size() << '\n';
  for (std::size_t from = 0; from < g.size(); ++from)
    for (std::size_t to = 0; to < g.size(); ++to)
      if (g.edge(from, to)) os << from << ' ' << to << '\n';
  return os.str();
}

Digraph from_edge_list(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  std::size_t m = 0;
  if (!(is >> tag >> m) || tag != "m") throw Error(ErrorKind::InvalidConfig, "edge list needs 'm <count>' header");
  Digraph g(m);
  std::size_t from = 0, to = 0;
  while (is >> from >> to) {
    if (from >= m || to >= m) throw Error(ErrorKind::InvalidConfig, "edge endpoint out of range");
    g.add_edge(from, to);
  }
  if (!is.eof()) throw Error(ErrorKind::InvalidConfig, "malformed edge line");
  return g;
}

}  // namespace tvsync
