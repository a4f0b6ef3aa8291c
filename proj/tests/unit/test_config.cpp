#include <doctest.h>

#include "tvsync/config.hpp"
#include "tvsync/estimators.hpp"
#include "tvsync/hajnal.hpp"

using namespace tvsync;
using nlohmann::json;

namespace {

std::string error_text(const json& j) {
  try {
    (void)config_from_json(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
    return e.what();
  }
  FAIL("expected InvalidConfig");
  return {};
}

json minimal_static() {
  return {{"source", {{"variant", "static"}, {"matrix", {{0.5, 0.5}, {0.25, 0.75}}}}}};
}

std::vector<json> every_variant() {
  return {
      minimal_static(),
      {{"source", {{"variant", "periodic"}, {"matrices", {{{1, 0}, {1, 0}}, {{0.5, 0.5}, {0.5, 0.5}}}}}}},
      {{"source",
        {{"variant", "finite_set"},
         {"matrices", {{{"rows", 2}, {"cols", 2}, {"data", {1, 0, 0.5, 0.5}}}, {{1, 0}, {0, 1}}}},
         {"weights", {1, 3}},
         {"seed", 12}}}},
      {{"source", {{"variant", "blinking"}, {"m", 20}, {"avg_degree", 4}, {"p", 0.05}, {"t_rec", 2}, {"graph_seed", 3}}},
       {"simulation", {{"steps", 50}, {"x0", "near_diagonal"}, {"x0_value", 0.4}, {"x0_spread", 0.01}, {"mu", 0.5}}}},
      {{"source", {{"variant", "blurring"}, {"m", 10}, {"r", 0.1}}},
       {"map", {{"kind", "linear"}, {"param", 0.9}}},
       {"estimator", {{"horizon", 64}, {"norm", "two"}, {"basis", "difference"}, {"t0_count", 3}}},
       {"simulation", {{"x0", "diagonal"}, {"x0_value", 0.2}}},
       {"seed", 99},
       {"output", "runs/b"}},
  };
}

}  // namespace

TEST_CASE("defaults fill in") {
  const auto c = config_from_json(minimal_static());
  CHECK(c.map.kind == MapKind::Logistic);
  CHECK(c.map.param == 3.9);
  CHECK(c.estimator.horizon == 1000);
  CHECK(c.estimator.t0_count == 16);
  CHECK(c.estimator.norm == NormKind::Inf);
  CHECK(c.simulation.x0 == X0Policy::Uniform);
  CHECK(c.seed == 1);
  CHECK(source_dim(c) == 2);
}

TEST_CASE("every variant round trips losslessly") {
  for (const auto& j : every_variant()) {
    const auto c = config_from_json(j);
    const json once = c;
    const auto back = config_from_json(once);
    CHECK(back == c);
    const json twice = back;
    CHECK(once.dump() == twice.dump());
    CHECK(config_hash(back) == config_hash(c));
  }
}

TEST_CASE("hash tracks content") {
  auto a = config_from_json(minimal_static());
  auto b = a;
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("validation errors name the field") {
  auto j = minimal_static();
  j["extra"] = 1;
  CHECK(error_text(j).find("/extra") != std::string::npos);

  j = minimal_static();
  j["source"]["matrix"] = {{0.5, 0.6}, {0.25, 0.75}};
  CHECK(error_text(j).find("/source/matrix") != std::string::npos);

  j = minimal_static();
  j["map"] = {{"kind", "tent"}};
  CHECK(error_text(j).find("/map/kind") != std::string::npos);

  j = minimal_static();
  j["estimator"] = {{"horizon", -3}};
  CHECK(error_text(j).find("/estimator/horizon") != std::string::npos);

  j = minimal_static();
  j["estimator"] = {{"horizon", 4}, {"renorm_every", 8}};
  CHECK(error_text(j).find("/estimator/renorm_every") != std::string::npos);

  j = {{"source", {{"variant", "blinking"}, {"m", 10}, {"p", 2.0}}}};
  CHECK(error_text(j).find("/source/p") != std::string::npos);

  j = {{"source", {{"variant", "blinking"}, {"m", 10}, {"p", 0.1}, {"avg_degree", 12}}}};
  CHECK(error_text(j).find("/source/avg_degree") != std::string::npos);

  j = {{"source", {{"variant", "blurring"}, {"m", 10}}}};
  CHECK(error_text(j).find("/source/r") != std::string::npos);

  j = {{"source", {{"variant", "blurring"}, {"m", 10}, {"r", 0.1}, {"p", 0.1}}}};
  CHECK(error_text(j).find("/source/p") != std::string::npos);

  j = {{"source", {{"variant", "finite_set"}, {"matrices", {{{1, 0}, {0, 1}}}}, {"weights", {1, 2}}}}};
  CHECK(error_text(j).find("/source/weights") != std::string::npos);

  j = {{"source", {{"variant", "periodic"}, {"matrices", {{{1, 0}, {0, 1}}, {{1}}}}}}};
  CHECK(error_text(j).find("/source/matrices/1") != std::string::npos);

  j = minimal_static();
  j["simulation"] = {{"x0", "explicit"}, {"x0_values", {0.1, 0.2, 0.3}}};
  CHECK(error_text(j).find("/simulation/x0_values") != std::string::npos);

  j = minimal_static();
  j["simulation"] = {{"x0", "uniform"}, {"x0_value", 0.2}};
  CHECK(error_text(j).find("/simulation/x0") != std::string::npos);

  j = {{"source", {{"variant", "cubic"}}}};
  CHECK(error_text(j).find("/source/variant") != std::string::npos);

  CHECK(error_text(json::object()).find("/source") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    (void)parse_config("{\n  \"seed\": 1,\n  \"source\": {,}\n}");
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
    CHECK(std::string(e.what()).find("<config>:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("matrix formats") {
  const auto a = matrix_from_json(json{{1, 2}, {3, 4}}, "/m");
  const auto b = matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3, 4}}}, "/m");
  CHECK(a == b);
  CHECK_THROWS_AS(matrix_from_json(json{{1, 2}, {3}}, "/m"), Error);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}}, "/m"), Error);
  CHECK_THROWS_AS(matrix_from_json(json("x"), "/m"), Error);
}

TEST_CASE("seeds determine sources") {
  auto c = config_from_json(every_variant()[4]);
  auto s1 = build_source(c), s2 = build_source(c);
  for (std::size_t t = 0; t < 20; ++t) CHECK(s1.at(t) == s2.at(t));
  auto d = c;
  d.seed = 100;
  CHECK(source_seed(d) != source_seed(c));
  auto s3 = build_source(d);
  CHECK_FALSE(s3.at(5) == s1.at(5));

  d.source.seed = 77;
  CHECK(source_seed(d) == 77);
  auto e = d;
  e.seed = 5;
  CHECK(source_seed(e) == 77);

  auto fs = config_from_json(every_variant()[2]);
  CHECK(source_seed(fs) == 12);
  CHECK(graph_seed(config_from_json(every_variant()[3])) == 3);
}

TEST_CASE("initial state policies") {
  auto c = config_from_json(minimal_static());
  const auto u = initial_state(c, 50);
  CHECK(u == initial_state(c, 50));
  for (double v : u) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  c.simulation.x0 = X0Policy::Diagonal;
  c.simulation.x0_value = 0.4;
  for (double v : initial_state(c, 5)) CHECK(v == 0.4);
  c.simulation.x0 = X0Policy::NearDiagonal;
  c.simulation.x0_spread = 1e-3;
  for (double v : initial_state(c, 50)) CHECK(std::abs(v - 0.4) <= 1e-3);
  c.simulation.x0 = X0Policy::Explicit;
  c.simulation.x0_values = {0.1, 0.9};
  CHECK(initial_state(c, 2) == std::vector<double>{0.1, 0.9});
}

TEST_CASE("enum names round trip") {
  for (auto v : {SourceVariant::Static, SourceVariant::Periodic, SourceVariant::FiniteSet, SourceVariant::Blinking,
                 SourceVariant::Blurring})
    CHECK(parse_source_variant(to_string(v)) == v);
  for (auto p : {X0Policy::Uniform, X0Policy::Diagonal, X0Policy::NearDiagonal, X0Policy::Explicit})
    CHECK(parse_x0_policy(to_string(p)) == p);
  for (auto n : {NormKind::Inf, NormKind::One, NormKind::Two}) CHECK(parse_norm_kind(to_string(n)) == n);
  for (auto b : {BasisKind::Difference, BasisKind::Orthonormal}) CHECK(parse_basis_kind(to_string(b)) == b);
}
