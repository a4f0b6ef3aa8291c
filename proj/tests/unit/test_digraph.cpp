#include <doctest.h>

#include "support/fixtures.hpp"
#include "tvsync/digraph.hpp"
#include "tvsync/hajnal.hpp"

using namespace tvsync;

namespace {

Digraph edges(std::size_t m, std::initializer_list<std::pair<std::size_t, std::size_t>> list) {
  Digraph g(m);
  for (auto [from, to] : list) g.add_edge(from, to);
  return g;
}

}  // namespace

TEST_CASE("graph of a matrix") {
  const auto id = from_matrix(Matrix::identity(3));
  CHECK(id.cross_edge_count() == 0);
  CHECK(id.edge_count() == 3);

  const auto full = from_matrix(Matrix(4, 4, 0.25));
  CHECK(full.edge_count() == 16);

  // G_01 > 0: vertex 1 influences vertex 0
  const auto g = from_matrix(Matrix{{.5, .5}, {0, 1}});
  CHECK(g.edge(1, 0));
  CHECK_FALSE(g.edge(0, 1));
  CHECK(g.cross_edge_count() == 1);

  CHECK(from_matrix(Matrix{{0.9, 0.1}, {0, 1}}, 0.2).cross_edge_count() == 0);
}

TEST_CASE("union") {
  const auto g = edges(3, {{0, 1}, {2, 2}});
  CHECK(graph_union({g, g}) == g);
  const auto u = graph_union({edges(2, {{0, 1}}), edges(2, {{1, 0}})});
  CHECK(u.edge(0, 1));
  CHECK(u.edge(1, 0));
  CHECK_THROWS_AS(graph_union({}), Error);
  try {
    graph_union({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyList);
  }
  try {
    graph_union({Digraph(2), Digraph(3)});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("spanning tree examples") {
  CHECK(has_spanning_tree(edges(3, {{0, 1}, {0, 2}})) == std::optional<std::size_t>(0));
  CHECK_FALSE(has_spanning_tree(Digraph(2)));
  CHECK(has_spanning_tree(edges(3, {{0, 1}, {1, 2}, {2, 0}})) == std::optional<std::size_t>(0));
  CHECK(has_spanning_tree(edges(1, {})) == std::optional<std::size_t>(0));
  // root is not vertex 0
  CHECK(has_spanning_tree(edges(4, {{2, 0}, {2, 3}, {3, 1}})) == std::optional<std::size_t>(2));
  // two source components
  CHECK_FALSE(has_spanning_tree(edges(3, {{0, 2}, {1, 2}})));
}

TEST_CASE("spanning tree agrees with brute force") {
  Rng rng(17);
  int with_tree = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + rng.below(9);
    const double density = rng.uniform(0.0, 0.4);
    Digraph g(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (rng.uniform() < density) g.add_edge(i, j);
    const auto fast = has_spanning_tree(g);
    CHECK(fast == has_spanning_tree_bruteforce(g));
    with_tree += fast ? 1 : 0;
  }
  CHECK(with_tree > 200);
  CHECK(with_tree < 1800);
}

TEST_CASE("strongly connected components") {
  std::size_t count = 0;
  const auto comp = strongly_connected_components(edges(5, {{0, 1}, {1, 0}, {1, 2}, {3, 4}, {4, 3}}), &count);
  CHECK(count == 3);
  CHECK(comp[0] == comp[1]);
  CHECK(comp[3] == comp[4]);
  CHECK(comp[2] != comp[0]);
  CHECK(comp[2] != comp[3]);
}

TEST_CASE("scrambling graph") {
  CHECK(is_scrambling_graph(from_matrix(Matrix(3, 3, 1.0))));
  CHECK_FALSE(is_scrambling_graph(from_matrix(Matrix::identity(3))));
  CHECK(is_scrambling_graph(from_matrix(Matrix{{0.5, 0, 0.5}, {0, 0.2, 0.8}, {0, 0, 1}})));
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = fixtures::random_stochastic(rng, 2 + rng.below(5), 0.6);
    CHECK(is_scrambling_graph(from_matrix(g)) == is_scrambling(g));
  }
}

TEST_CASE("window spanning tree") {
  const auto connected = MatrixSequenceSource::make_static(make_stochastic(Matrix{{1, 1}, {1, 1}}));
  auto s = connected;
  CHECK(window_has_spanning_tree(s, 0, 1));
  CHECK(window_has_spanning_tree(s, 7, 3));

  // alternating 0->1 and 1->2 (self-loops keep rows nonzero)
  const auto a = make_stochastic(Matrix{{1, 0, 0}, {1, 1, 0}, {0, 0, 1}});
  const auto b = make_stochastic(Matrix{{1, 0, 0}, {0, 1, 0}, {0, 1, 1}});
  auto alt = MatrixSequenceSource::make_periodic({a, b});
  CHECK(window_has_spanning_tree(alt, 0, 2));
  CHECK(window_has_spanning_tree(alt, 1, 2));
  CHECK_FALSE(window_has_spanning_tree(alt, 0, 1));
  CHECK_FALSE(window_has_spanning_tree(alt, 1, 1));
  CHECK(window_has_spanning_tree(alt, 1, 1, WindowConvention::Inclusive));

  auto id = MatrixSequenceSource::make_static(make_stochastic(Matrix::identity(3)));
  for (std::size_t t0 : {0u, 5u})
    for (std::size_t T : {1u, 4u}) CHECK_FALSE(window_has_spanning_tree(id, t0, T));
}

TEST_CASE("scrambling product") {
  CHECK(scrambling_product_check({make_stochastic(Matrix{{1, 1}, {0, 1}})}));

  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.below(5);
    std::vector<StochasticMatrix> list;
    for (std::size_t k = 0; k + 1 < m; ++k) list.push_back(fixtures::random_spanning_tree_stochastic(rng, m, 0.0));
    CHECK(scrambling_product_check(list));
  }

  const auto tree = make_stochastic(Matrix{{1, 0, 0}, {1, 1, 0}, {0, 1, 1}});
  const auto split = make_stochastic(Matrix::identity(3));
  try {
    scrambling_product_check({tree, split});
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolated);
    CHECK(std::string(e.what()).find("matrix 1") != std::string::npos);
  }
  const auto zero_diag = make_stochastic(Matrix{{0, 1, 0}, {1, 1, 0}, {0, 1, 1}});
  CHECK_THROWS_AS(scrambling_product_check({tree, zero_diag}), Error);
  CHECK_THROWS_AS(scrambling_product_check({tree}), Error);
}

TEST_CASE("edge list round trip") {
  const auto g = edges(4, {{0, 1}, {3, 2}, {2, 2}});
  const auto text = to_edge_list(g);
  CHECK(text == "m 4\n0 1\n2 2\n3 2\n");
  CHECK(from_edge_list(text) == g);
  CHECK_THROWS_AS(from_edge_list("m 2\n0 5\n"), Error);
  CHECK_THROWS_AS(from_edge_list("n 2\n"), Error);
  CHECK_THROWS_AS(from_edge_list("m 2\n0 x\n"), Error);
}
