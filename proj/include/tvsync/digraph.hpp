#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvsync/matrix.hpp"
#include "tvsync/sequence.hpp"

namespace tvsync {

/// Directed graph on vertices 0..m-1. edge(j, i) means j influences i, the
/// orientation of a coupling matrix with G_ij > 0. Self-loops are stored when
/// the source matrix has them and are neutral for reachability.
class Digraph {
 public:
  explicit Digraph(std::size_t m = 0) : m_(m), in_(m * m, 0) {}

  std::size_t size() const noexcept { return m_; }
  bool edge(std::size_t from, std::size_t to) const noexcept { return in_[to * m_ + from] != 0; }
  void add_edge(std::size_t from, std::size_t to) noexcept { in_[to * m_ + from] = 1; }
  std::size_t edge_count() const noexcept;
  /// Edges excluding self-loops.
  std::size_t cross_edge_count() const noexcept;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::size_t m_;
  std::vector<std::uint8_t> in_;  // in_[to*m + from]
};

Digraph from_matrix(const Matrix& g, double threshold = 0.0);

/// Edge set union; throws EmptyList / DimensionMismatch.
Digraph graph_union(const std::vector<Digraph>& graphs);

/// Smallest-index root from which every vertex is reachable, via the
/// strongly-connected-component condensation (exactly one source component).
std::optional<std::size_t> has_spanning_tree(const Digraph& g);

/// Same answer by brute force: iterative DFS from each candidate root in
/// index order. Kept as the cross-check for the condensation route.
std::optional<std::size_t> has_spanning_tree_bruteforce(const Digraph& g);

/// Strongly connected components; returns component id per vertex, ids in
/// reverse topological order of discovery (Tarjan), iterative.
std::vector<std::size_t> strongly_connected_components(const Digraph& g, std::size_t* count = nullptr);

/// Every pair i != j shares an in-neighbour k (self-loops allowed).
bool is_scrambling_graph(const Digraph& g);

/// How many graphs a window of length T covers.
enum class WindowConvention {
  /// [t0, t0+T-1]: T graphs, matching the product window
  Length,
  /// [t0, t0+T]: T+1 graphs, the inclusive reading
  Inclusive,
};

bool window_has_spanning_tree(MatrixSequenceSource& source, std::size_t t0, std::size_t T,
                              WindowConvention convention = WindowConvention::Length,
                              double threshold = 0.0);

/// Verifies that the left product of m-1 matrices with positive diagonals
/// and spanning trees is scrambling. Throws PreconditionViolated naming the
/// offending matrix when the inputs do not qualify.
bool scrambling_product_check(const std::vector<StochasticMatrix>& matrices);

/// "m <count>" header, then one "j i" line per edge j -> i (0-based).
std::string to_edge_list(const Digraph& g);
Digraph from_edge_list(const std::string& text);

}  // namespace tvsync
