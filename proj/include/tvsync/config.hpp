#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvsync/cml.hpp"
#include "tvsync/matrix.hpp"
#include "tvsync/sequence.hpp"

namespace tvsync {

enum class SourceVariant { Static, Periodic, FiniteSet, Blinking, Blurring };

SourceVariant parse_source_variant(std::string_view name);
std::string_view to_string(SourceVariant v) noexcept;

/// Which fields are used depends on the variant. Seeds left empty are derived
/// from the experiment seed.
struct SourceConfig {
  SourceVariant variant = SourceVariant::Static;
  std::vector<Matrix> matrices;  // static: one; periodic: the cycle; finite_set: the set
  std::vector<double> weights;   // finite_set, empty = uniform
  std::size_t m = 0;             // blinking, blurring
  std::size_t avg_degree = 12;   // blinking
  double p = 0.01;               // blinking
  std::size_t t_rec = 3;         // blinking
  double r = 0.05;               // blurring
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> graph_seed;  // blinking base graph

  bool operator==(const SourceConfig&) const = default;
};

struct MapConfig {
  MapKind kind = MapKind::Logistic;
  double param = 3.9;
  bool operator==(const MapConfig&) const = default;
};

struct EstimatorConfig {
  std::size_t horizon = 1000;
  std::size_t t0_count = 16;
  std::size_t t0_stride = 0;  // 0: horizon / 8
  std::size_t renorm_every = 8;
  std::size_t n_vectors = 8;
  NormKind norm = NormKind::Inf;
  BasisKind basis = BasisKind::Orthonormal;
  bool operator==(const EstimatorConfig&) const = default;
};

enum class X0Policy { Uniform, Diagonal, NearDiagonal, Explicit };

X0Policy parse_x0_policy(std::string_view name);
std::string_view to_string(X0Policy p) noexcept;

struct SimulationConfig {
  std::size_t steps = 1000;
  std::size_t record_every = 1;
  X0Policy x0 = X0Policy::Uniform;
  double x0_value = 0.3;      // diagonal / near_diagonal centre
  double x0_spread = 1e-3;    // near_diagonal half-width
  std::vector<double> x0_values;  // explicit
  std::optional<double> mu;
  bool operator==(const SimulationConfig&) const = default;
};

struct ExperimentConfig {
  SourceConfig source;
  MapConfig map;
  EstimatorConfig estimator;
  SimulationConfig simulation;
  std::uint64_t seed = 1;
  std::string output = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Validates every field; errors name the offending JSON path.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Parses text, reporting syntax errors with line and column.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Reads a JSON file; syntax errors carry line and column.
nlohmann::json read_json_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

/// FNV-1a over the canonical (sorted-key, compact) JSON dump.
std::uint64_t config_hash(const ExperimentConfig& c);
std::string hex64(std::uint64_t v);
std::uint64_t fnv1a(std::string_view bytes);

/// Builds the coupling sequence described by the config.
MatrixSequenceSource build_source(const ExperimentConfig& c);
std::uint64_t source_seed(const ExperimentConfig& c);
std::uint64_t graph_seed(const ExperimentConfig& c);
std::size_t source_dim(const ExperimentConfig& c);

/// Initial state under the configured policy (uniform draws in (0, 1)).
std::vector<double> initial_state(const ExperimentConfig& c, std::size_t m);

/// Matrix from {"rows","cols","data"} or a nested array of rows.
Matrix matrix_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace tvsync
