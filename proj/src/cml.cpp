#include "tvsync/cml.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tvsync/format.hpp"
#include "tvsync/kernels.hpp"
#include "tvsync/rng.hpp"

namespace tvsync {

MapKind parse_map_kind(std::string_view name) {
  if (name == "logistic") return MapKind::Logistic;
  if (name == "linear") return MapKind::Linear;
  throw Error(ErrorKind::InvalidConfig, "unknown map '" + std::string(name) + "'");
}

std::string_view to_string(MapKind kind) noexcept {
  return kind == MapKind::Logistic ? "logistic" : "linear";
}

ScalarMap ScalarMap::logistic(double alpha) {
  return {MapKind::Logistic, alpha, [alpha](double s) { return alpha * s * (1.0 - s); },
          [alpha](double s) { return alpha * (1.0 - 2.0 * s); }};
}

ScalarMap ScalarMap::linear(double a) {
  return {MapKind::Linear, a, [a](double s) { return a * s; }, [a](double) { return a; }};
}

ScalarMap ScalarMap::make(MapKind kind, double param) {
  if (!std::isfinite(param)) throw Error(ErrorKind::InvalidConfig, "map parameter must be finite");
  return kind == MapKind::Logistic ? logistic(param) : linear(param);
}

std::string ScalarMap::name() const {
  return std::string(to_string(kind)) + "(" + format_number(param) + ")";
}

double derivative_mismatch(const ScalarMap& map, std::size_t samples, double lo, double hi,
                           std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = rng.uniform(lo, hi);
    const double h = 1e-5 * std::max(1.0, std::abs(s));
    const double fd = (map.f(s + h) - map.f(s - h)) / (2.0 * h);
    const double exact = map.df(s);
    worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-3));
  }
  return worst;
}

Criterion criterion(const LogGrowth& sigma1, double mu) {
  if (!std::isfinite(mu)) throw Error(ErrorKind::NonFinite, "mu must be finite");
  Criterion c;
  if (sigma1.is_neg_inf()) return c;
  const double w = sigma1.value() + mu;
  c.W = LogGrowth::finite(w);
  c.predicted_sync = w < 0.0;
  c.indeterminate = std::abs(w) < kIndeterminateBand;
  return c;
}

namespace {

double node_variance(std::span<const double> x) {
  const std::size_t m = x.size();
  if (m < 2) return 0.0;
  const double ref = x[0];
  double mean = 0.0;
  for (double v : x) mean += v - ref;
  mean /= static_cast<double>(m);
  double s = 0.0;
  for (double v : x) s += (v - ref - mean) * (v - ref - mean);
  return s / static_cast<double>(m - 1);
}

double state_diam(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

}  // namespace

SimulationResult simulate(MatrixSequenceSource& source, const ScalarMap& map,
                          std::vector<double> x0, const SimulateOptions& options) {
  const std::size_t m = source.dim();
  if (options.steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  if (options.record_every < 1) throw Error(ErrorKind::InvalidParams, "record_every must be >= 1");
  if (x0.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "x0 has " + std::to_string(x0.size()) +
                                                  " entries, source dimension is " + std::to_string(m));
  }
  for (double v : x0)
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "x0 must be finite");

  SimulationResult result;
  SyncReport& rep = result.report;

  if (options.mu) {
    rep.mu = *options.mu;
    rep.mu_source = "supplied";
  } else {
    rep.mu = estimate_scalar_lyapunov(map.f, map.df, options.mu_start, options.mu_burn_in,
                                      options.mu_horizon);
    rep.mu_source = "estimated";
  }
  if (options.sigma1) {
    rep.sigma1 = *options.sigma1;
  } else if (m >= 2) {
    const auto basis = projection_basis(m, options.basis);
    const std::size_t renorm = std::min(options.renorm_every, options.steps);
    rep.sigma1 = estimate_sigma1(source, basis, options.steps, renorm, options.n_vectors, options.seed).value;
  }
  const Criterion c = criterion(rep.sigma1, rep.mu);
  rep.W = c.W;
  rep.predicted_sync = c.predicted_sync;
  rep.indeterminate = c.indeterminate;

  std::vector<double> x = std::move(x0), y(m), next(m);
  double var_sum = 0.0, late_sum = 0.0;
  std::size_t late_count = 0;
  const std::size_t late_from = options.steps / 2;
  auto observe = [&](std::size_t t) {
    const double v = node_variance(x);
    var_sum += v;
    if (t >= late_from) {
      late_sum += v;
      ++late_count;
    }
    if (t % options.record_every == 0 || t == options.steps) {
      rep.series.push_back({t, var_sum / static_cast<double>(t + 1), state_diam(x)});
      if (options.keep_trajectory) result.trajectory.push_back({x, t});
    }
  };

  observe(0);
  for (std::size_t t = 0; t < options.steps; ++t) {
    for (std::size_t i = 0; i < m; ++i) y[i] = map.f(x[i]);
    kernels::anchored_matvec(source.at(t).matrix(), y, next);
    std::swap(x, next);
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(x[i]) || std::abs(x[i]) > 1e12) {
        throw Error(ErrorKind::StateDiverged, "|x_" + std::to_string(i) + "| exceeded 1e12 at t=" +
                                                  std::to_string(t + 1));
      }
    }
    observe(t + 1);
  }
  rep.final_diam = state_diam(x);
  rep.observed_sync = rep.final_diam < kSyncThreshold;
  rep.late_K = late_count ? late_sum / static_cast<double>(late_count) : 0.0;
  return result;
}

double sync_metric_K(const std::vector<std::vector<double>>& frames) {
  if (frames.empty()) throw Error(ErrorKind::InvalidParams, "empty window");
  const std::size_t m = frames.front().size();
  if (m < 2) throw Error(ErrorKind::DegenerateDimension, "K needs m >= 2");
  double sum = 0.0;
  for (const auto& x : frames) {
    if (x.size() != m) throw Error(ErrorKind::DimensionMismatch, "frames differ in size");
    sum += node_variance(x);
  }
  return sum / static_cast<double>(frames.size());
}

std::vector<double> variational_step(const StochasticMatrix& g, double df_at_s,
                                     std::span<const double> delta) {
  if (delta.size() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "delta size differs from G");
  std::vector<double> out = g.matrix() * delta;
  for (double& v : out) v *= df_at_s;
  return out;
}

void write_sync_csv(std::ostream& out, const SyncReport& report,
                    const std::vector<std::pair<std::string, std::string>>& header) {
  for (const auto& [key, value] : header) out << "# " << key << '=' << value << '\n';
  out << "# sigma1=" << (report.sigma1.is_neg_inf() ? "-inf" : format_number(report.sigma1.value())) << '\n';
  out << "# mu=" << format_number(report.mu) << '\n';
  out << "# mu_source=" << report.mu_source << '\n';
  out << "# W=" << (report.W.is_neg_inf() ? "-inf" : format_number(report.W.value())) << '\n';
  out << "# predicted_sync=" << (report.predicted_sync ? "true" : "false") << '\n';
  out << "# observed_sync=" << (report.observed_sync ? "true" : "false") << '\n';
  out << "t,K,diam\n";
  for (const auto& s : report.series) {
    out << s.t << ',' << format_number(s.K) << ',' << format_number(s.diam) << '\n';
  }
}

}  // namespace tvsync
