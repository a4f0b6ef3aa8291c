#include "tvsync/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tvsync/processes.hpp"
#include "tvsync/rng.hpp"

namespace tvsync {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, (path.empty() ? std::string("/") : path) + ": " + what);
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path + "/" + key, "unknown field");
  }
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path + "/" + key, "must be finite");
  return d;
}

std::uint64_t get_count(const json& j, const std::string& key, const std::string& path) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(path + "/" + key, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  const auto& v = j.at(key);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidConfig && std::string_view(e.what()).find(": /") != std::string_view::npos) throw;
    throw Error(e.is_config_error() ? ErrorKind::InvalidConfig : e.kind(),
                (path.empty() ? std::string("/") : path) + ": " + e.what());
  }
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (double v : m.row(i)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

SourceConfig source_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (!j.contains("variant")) fail(path + "/variant", "missing");
  SourceConfig s;
  s.variant = with_path(path + "/variant", [&] { return parse_source_variant(get_string(j, "variant", path)); });
  auto need = [&](const char* key) {
    if (!j.contains(key)) fail(path + "/" + key, "missing");
  };
  auto matrices = [&](const char* key) {
    need(key);
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.empty()) fail(path + "/" + key, "expected a nonempty array of matrices");
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      out.push_back(matrix_from_json(arr[k], path + "/" + key + "/" + std::to_string(k)));
    }
    return out;
  };
  auto seeds = [&] {
    if (j.contains("seed")) s.seed = get_count(j, "seed", path);
  };

  switch (s.variant) {
    case SourceVariant::Static:
      reject_unknown(j, path, {"variant", "matrix"});
      need("matrix");
      s.matrices = {matrix_from_json(j.at("matrix"), path + "/matrix")};
      break;
    case SourceVariant::Periodic:
      reject_unknown(j, path, {"variant", "matrices"});
      s.matrices = matrices("matrices");
      break;
    case SourceVariant::FiniteSet:
      reject_unknown(j, path, {"variant", "matrices", "weights", "seed"});
      s.matrices = matrices("matrices");
      if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (!w.is_array()) fail(path + "/weights", "expected an array");
        for (std::size_t k = 0; k < w.size(); ++k) {
          if (!w[k].is_number()) fail(path + "/weights/" + std::to_string(k), "expected a number");
          s.weights.push_back(w[k].get<double>());
        }
      }
      seeds();
      break;
    case SourceVariant::Blinking:
      reject_unknown(j, path, {"variant", "m", "avg_degree", "p", "t_rec", "seed", "graph_seed"});
      need("m");
      need("p");
      s.m = get_count(j, "m", path);
      s.p = get_number(j, "p", path);
      if (j.contains("avg_degree")) s.avg_degree = get_count(j, "avg_degree", path);
      if (j.contains("t_rec")) s.t_rec = get_count(j, "t_rec", path);
      if (!(s.p >= 0.0 && s.p <= 1.0)) fail(path + "/p", "must lie in [0, 1]");
      if (s.t_rec < 1) fail(path + "/t_rec", "must be >= 1");
      if (s.avg_degree < 2 || s.avg_degree % 2 != 0 || s.m <= s.avg_degree) {
        fail(path + "/avg_degree", "must be even, >= 2 and below m");
      }
      seeds();
      if (j.contains("graph_seed")) s.graph_seed = get_count(j, "graph_seed", path);
      break;
    case SourceVariant::Blurring:
      reject_unknown(j, path, {"variant", "m", "r", "seed"});
      need("m");
      need("r");
      s.m = get_count(j, "m", path);
      s.r = get_number(j, "r", path);
      if (s.m < 2) fail(path + "/m", "must be >= 2");
      if (s.r < 0.0) fail(path + "/r", "must be >= 0");
      seeds();
      break;
  }

  // structural checks on explicit matrices
  if (!s.matrices.empty()) {
    const std::size_t m = s.matrices.front().rows();
    for (std::size_t k = 0; k < s.matrices.size(); ++k) {
      const std::string where = s.variant == SourceVariant::Static ? path + "/matrix"
                                                                  : path + "/matrices/" + std::to_string(k);
      if (!s.matrices[k].square() || s.matrices[k].rows() != m) fail(where, "matrices must be square and of equal size");
      with_path(where, [&] { return StochasticMatrix::validated(s.matrices[k], 1e-9); });
    }
    if (s.variant == SourceVariant::FiniteSet && !s.weights.empty() && s.weights.size() != s.matrices.size()) {
      fail(path + "/weights", "needs one weight per matrix");
    }
  }
  return s;
}

json source_to_json(const SourceConfig& s) {
  json j;
  j["variant"] = std::string(to_string(s.variant));
  switch (s.variant) {
    case SourceVariant::Static:
      j["matrix"] = matrix_json(s.matrices.front());
      break;
    case SourceVariant::Periodic:
    case SourceVariant::FiniteSet: {
      json arr = json::array();
      for (const auto& m : s.matrices) arr.push_back(matrix_json(m));
      j["matrices"] = std::move(arr);
      if (s.variant == SourceVariant::FiniteSet && !s.weights.empty()) j["weights"] = s.weights;
      break;
    }
    case SourceVariant::Blinking:
      j["m"] = s.m;
      j["avg_degree"] = s.avg_degree;
      j["p"] = s.p;
      j["t_rec"] = s.t_rec;
      if (s.graph_seed) j["graph_seed"] = *s.graph_seed;
      break;
    case SourceVariant::Blurring:
      j["m"] = s.m;
      j["r"] = s.r;
      break;
  }
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

}  // namespace

SourceVariant parse_source_variant(std::string_view name) {
  if (name == "static") return SourceVariant::Static;
  if (name == "periodic") return SourceVariant::Periodic;
  if (name == "finite_set") return SourceVariant::FiniteSet;
  if (name == "blinking") return SourceVariant::Blinking;
  if (name == "blurring") return SourceVariant::Blurring;
  throw Error(ErrorKind::InvalidConfig, "unknown source variant '" + std::string(name) + "'");
}

std::string_view to_string(SourceVariant v) noexcept {
  switch (v) {
    case SourceVariant::Static: return "static";
    case SourceVariant::Periodic: return "periodic";
    case SourceVariant::FiniteSet: return "finite_set";
    case SourceVariant::Blinking: return "blinking";
    case SourceVariant::Blurring: return "blurring";
  }
  return "static";
}

X0Policy parse_x0_policy(std::string_view name) {
  if (name == "uniform") return X0Policy::Uniform;
  if (name == "diagonal") return X0Policy::Diagonal;
  if (name == "near_diagonal") return X0Policy::NearDiagonal;
  if (name == "explicit") return X0Policy::Explicit;
  throw Error(ErrorKind::InvalidConfig, "unknown x0 policy '" + std::string(name) + "'");
}

std::string_view to_string(X0Policy p) noexcept {
  switch (p) {
    case X0Policy::Uniform: return "uniform";
    case X0Policy::Diagonal: return "diagonal";
    case X0Policy::NearDiagonal: return "near_diagonal";
    case X0Policy::Explicit: return "explicit";
  }
  return "uniform";
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  if (j.is_object()) return with_path(path, [&] { return j.get<Matrix>(); });
  if (!j.is_array() || j.empty()) fail(path, "expected a matrix (array of rows)");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<double> data;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.empty()) fail(path + "/" + std::to_string(i), "expected a nonempty row");
    if (i == 0) cols = row.size();
    if (row.size() != cols) fail(path + "/" + std::to_string(i), "ragged row");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number()) fail(path + "/" + std::to_string(i) + "/" + std::to_string(k), "expected a number");
      data.push_back(row[k].get<double>());
    }
  }
  return with_path(path, [&] { return Matrix(rows, cols, std::move(data)); });
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json::object();
  j["source"] = source_to_json(c.source);
  j["map"] = {{"kind", std::string(to_string(c.map.kind))}, {"param", c.map.param}};
  j["estimator"] = {{"horizon", c.estimator.horizon},
                    {"t0_count", c.estimator.t0_count},
                    {"t0_stride", c.estimator.t0_stride},
                    {"renorm_every", c.estimator.renorm_every},
                    {"n_vectors", c.estimator.n_vectors},
                    {"norm", std::string(to_string(c.estimator.norm))},
                    {"basis", std::string(to_string(c.estimator.basis))}};
  json sim = {{"steps", c.simulation.steps},
              {"record_every", c.simulation.record_every},
              {"x0", std::string(to_string(c.simulation.x0))}};
  switch (c.simulation.x0) {
    case X0Policy::Diagonal:
      sim["x0_value"] = c.simulation.x0_value;
      break;
    case X0Policy::NearDiagonal:
      sim["x0_value"] = c.simulation.x0_value;
      sim["x0_spread"] = c.simulation.x0_spread;
      break;
    case X0Policy::Explicit:
      sim["x0_values"] = c.simulation.x0_values;
      break;
    case X0Policy::Uniform:
      break;
  }
  if (c.simulation.mu) sim["mu"] = *c.simulation.mu;
  j["simulation"] = std::move(sim);
  j["seed"] = c.seed;
  j["output"] = c.output;
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, "", {"source", "map", "estimator", "simulation", "seed", "output"});
  ExperimentConfig c;
  if (!j.contains("source")) fail("/source", "missing");
  c.source = source_from_json(j.at("source"), "/source");

  if (j.contains("map")) {
    const auto& m = j.at("map");
    reject_unknown(m, "/map", {"kind", "param"});
    if (m.contains("kind")) c.map.kind = with_path("/map/kind", [&] { return parse_map_kind(get_string(m, "kind", "/map")); });
    if (m.contains("param")) c.map.param = get_number(m, "param", "/map");
  }

  if (j.contains("estimator")) {
    const auto& e = j.at("estimator");
    const std::string p = "/estimator";
    reject_unknown(e, p, {"horizon", "t0_count", "t0_stride", "renorm_every", "n_vectors", "norm", "basis"});
    if (e.contains("horizon")) c.estimator.horizon = get_count(e, "horizon", p);
    if (e.contains("t0_count")) c.estimator.t0_count = get_count(e, "t0_count", p);
    if (e.contains("t0_stride")) c.estimator.t0_stride = get_count(e, "t0_stride", p);
    if (e.contains("renorm_every")) c.estimator.renorm_every = get_count(e, "renorm_every", p);
    if (e.contains("n_vectors")) c.estimator.n_vectors = get_count(e, "n_vectors", p);
    if (e.contains("norm")) c.estimator.norm = with_path(p + "/norm", [&] { return parse_norm_kind(get_string(e, "norm", p)); });
    if (e.contains("basis")) c.estimator.basis = with_path(p + "/basis", [&] { return parse_basis_kind(get_string(e, "basis", p)); });
    if (c.estimator.horizon < 1) fail(p + "/horizon", "must be >= 1");
    if (c.estimator.t0_count < 1) fail(p + "/t0_count", "must be >= 1");
    if (c.estimator.renorm_every < 1 || c.estimator.renorm_every > c.estimator.horizon) {
      fail(p + "/renorm_every", "must lie in [1, horizon]");
    }
    if (c.estimator.n_vectors < 1) fail(p + "/n_vectors", "must be >= 1");
  }

  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    const std::string p = "/simulation";
    reject_unknown(s, p, {"steps", "record_every", "x0", "x0_value", "x0_spread", "x0_values", "mu"});
    if (s.contains("steps")) c.simulation.steps = get_count(s, "steps", p);
    if (s.contains("record_every")) c.simulation.record_every = get_count(s, "record_every", p);
    if (s.contains("x0")) c.simulation.x0 = with_path(p + "/x0", [&] { return parse_x0_policy(get_string(s, "x0", p)); });
    if (s.contains("x0_value")) c.simulation.x0_value = get_number(s, "x0_value", p);
    if (s.contains("x0_spread")) c.simulation.x0_spread = get_number(s, "x0_spread", p);
    if (s.contains("x0_values")) {
      const auto& v = s.at("x0_values");
      if (!v.is_array()) fail(p + "/x0_values", "expected an array");
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number()) fail(p + "/x0_values/" + std::to_string(k), "expected a number");
        c.simulation.x0_values.push_back(v[k].get<double>());
      }
    }
    if (s.contains("mu") && !s.at("mu").is_null()) c.simulation.mu = get_number(s, "mu", p);
    if (c.simulation.steps < 1) fail(p + "/steps", "must be >= 1");
    if (c.simulation.record_every < 1) fail(p + "/record_every", "must be >= 1");
    const bool has_value = s.contains("x0_value"), has_spread = s.contains("x0_spread"), has_values = s.contains("x0_values");
    switch (c.simulation.x0) {
      case X0Policy::Uniform:
        if (has_value || has_spread || has_values) fail(p + "/x0", "uniform takes no x0_value/x0_spread/x0_values");
        break;
      case X0Policy::Diagonal:
        if (has_spread || has_values) fail(p + "/x0", "diagonal takes only x0_value");
        break;
      case X0Policy::NearDiagonal:
        if (has_values) fail(p + "/x0", "near_diagonal takes x0_value and x0_spread");
        if (c.simulation.x0_spread < 0.0) fail(p + "/x0_spread", "must be >= 0");
        break;
      case X0Policy::Explicit:
        if (!has_values) fail(p + "/x0_values", "missing");
        if (has_value || has_spread) fail(p + "/x0", "explicit takes only x0_values");
        break;
    }
  }

  if (j.contains("seed")) c.seed = get_count(j, "seed", "");
  if (j.contains("output")) c.output = get_string(j, "output", "");

  if (c.simulation.x0 == X0Policy::Explicit && c.simulation.x0_values.size() != source_dim(c)) {
    fail("/simulation/x0_values", "needs " + std::to_string(source_dim(c)) + " entries");
  }
  return c;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::InvalidConfig, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                              ": JSON syntax error");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

ExperimentConfig parse_config(const std::string& text) {
  return config_from_json(parse_json_text(text, "<config>"));
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(read_json_file(path));
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k, v >>= 4) s[static_cast<std::size_t>(k)] = digits[v & 0xf];
  return s;
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  const json j = c;
  return fnv1a(j.dump());
}

namespace {
constexpr std::uint64_t kSourceLabel = 1;
constexpr std::uint64_t kGraphLabel = 2;
constexpr std::uint64_t kX0Label = 3;
}  // namespace

std::uint64_t source_seed(const ExperimentConfig& c) {
  return c.source.seed ? *c.source.seed : derive_seed(c.seed, kSourceLabel);
}

std::uint64_t graph_seed(const ExperimentConfig& c) {
  return c.source.graph_seed ? *c.source.graph_seed : derive_seed(c.seed, kGraphLabel);
}

std::size_t source_dim(const ExperimentConfig& c) {
  return c.source.matrices.empty() ? c.source.m : c.source.matrices.front().rows();
}

MatrixSequenceSource build_source(const ExperimentConfig& c) {
  const auto& s = c.source;
  auto stochastic = [&] {
    std::vector<StochasticMatrix> out;
    for (const auto& m : s.matrices) out.push_back(make_stochastic(m));
    return out;
  };
  switch (s.variant) {
    case SourceVariant::Static:
      return MatrixSequenceSource::make_static(make_stochastic(s.matrices.front()));
    case SourceVariant::Periodic:
      return MatrixSequenceSource::make_periodic(stochastic());
    case SourceVariant::FiniteSet:
      return MatrixSequenceSource::make_finite_set(stochastic(), s.weights, source_seed(c));
    case SourceVariant::Blinking:
      return MatrixSequenceSource::make_driven(std::make_unique<BlinkingProcess>(
          scale_free_graph(s.m, s.avg_degree, graph_seed(c)), s.p, s.t_rec, source_seed(c)));
    case SourceVariant::Blurring:
      return MatrixSequenceSource::make_driven(std::make_unique<BlurringProcess>(s.m, s.r, source_seed(c)));
  }
  throw Error(ErrorKind::InvalidConfig, "unhandled source variant");
}

std::vector<double> initial_state(const ExperimentConfig& c, std::size_t m) {
  const auto& s = c.simulation;
  Rng rng(derive_seed(c.seed, kX0Label));
  std::vector<double> x(m);
  switch (s.x0) {
    case X0Policy::Uniform:
      for (double& v : x) {
        do {
          v = rng.uniform();
        } while (v == 0.0);
      }
      break;
    case X0Policy::Diagonal:
      std::fill(x.begin(), x.end(), s.x0_value);
      break;
    case X0Policy::NearDiagonal:
      for (double& v : x) v = s.x0_value + rng.uniform(-s.x0_spread, s.x0_spread);
      break;
    case X0Policy::Explicit:
      if (s.x0_values.size() != m) throw Error(ErrorKind::InvalidConfig, "/simulation/x0_values: wrong length");
      x = s.x0_values;
      break;
  }
  return x;
}

}  // namespace tvsync
