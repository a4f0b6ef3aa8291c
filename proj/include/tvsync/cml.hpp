#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvsync/estimators.hpp"
#include "tvsync/matrix.hpp"
#include "tvsync/sequence.hpp"

namespace tvsync {

enum class MapKind { Logistic, Linear };

MapKind parse_map_kind(std::string_view name);
std::string_view to_string(MapKind kind) noexcept;

/// Node map f with its derivative. Logistic: f(s) = a s (1 - s).
/// Linear: f(s) = a s.
struct ScalarMap {
  MapKind kind = MapKind::Logistic;
  double param = 3.9;
  ScalarFn f;
  ScalarFn df;

  static ScalarMap logistic(double alpha);
  static ScalarMap linear(double a);
  static ScalarMap make(MapKind kind, double param);

  std::string name() const;
};

/// Largest relative error between df and a central difference of f over
/// `samples` uniform points in [lo, hi].
double derivative_mismatch(const ScalarMap& map, std::size_t samples = 100, double lo = 0.0,
                           double hi = 1.0, std::uint64_t seed = 1);

struct CmlState {
  std::vector<double> x;
  std::size_t t = 0;
};

struct SyncSample {
  std::size_t t = 0;
  /// running time average of the node variance over steps 0..t
  double K = 0.0;
  /// max_i x_i - min_i x_i
  double diam = 0.0;
};

struct Criterion {
  LogGrowth W = LogGrowth::neg_inf();
  bool predicted_sync = true;
  /// |W| < 0.05: the sufficient condition cannot decide
  bool indeterminate = false;
};

inline constexpr double kSyncThreshold = 1e-8;
inline constexpr double kIndeterminateBand = 0.05;

/// W = sigma1 + mu; the collapsed sentinel predicts synchronization.
Criterion criterion(const LogGrowth& sigma1, double mu);

struct SyncReport {
  std::vector<SyncSample> series;
  LogGrowth sigma1 = LogGrowth::neg_inf();
  double mu = 0.0;
  std::string mu_source;
  LogGrowth W = LogGrowth::neg_inf();
  bool predicted_sync = true;
  bool indeterminate = false;
  bool observed_sync = false;
  double final_diam = 0.0;
  /// mean node variance over the second half of the run
  double late_K = 0.0;
};

struct SimulateOptions {
  std::size_t steps = 1000;
  std::size_t record_every = 1;
  /// supplied Lyapunov exponent of the node map; estimated when empty
  std::optional<double> mu;
  std::size_t mu_burn_in = 1000;
  std::size_t mu_horizon = 100000;
  double mu_start = 0.3;
  /// transverse exponent of the coupling; estimated over the run when empty
  std::optional<LogGrowth> sigma1;
  std::size_t renorm_every = 8;
  std::size_t n_vectors = 8;
  BasisKind basis = BasisKind::Orthonormal;
  std::uint64_t seed = 0;
  bool keep_trajectory = false;
};

struct SimulationResult {
  std::vector<CmlState> trajectory;
  SyncReport report;
};

/// x(t+1) = G(t) F(x(t)). Each row is applied as y_0 + sum_j G_ij (y_j - y_0),
/// which leaves equal states exactly equal.
SimulationResult simulate(MatrixSequenceSource& source, const ScalarMap& map,
                          std::vector<double> x0, const SimulateOptions& options);

/// Time average over the frames of (1/(m-1)) sum_i (x_i - mean)^2.
double sync_metric_K(const std::vector<std::vector<double>>& frames);

/// df_at_s * G * delta.
std::vector<double> variational_step(const StochasticMatrix& g, double df_at_s,
                                     std::span<const double> delta);

/// CSV with a '#' header (one key=value per line) and columns t,K,diam.
void write_sync_csv(std::ostream& out, const SyncReport& report,
                    const std::vector<std::pair<std::string, std::string>>& header);

}  // namespace tvsync
