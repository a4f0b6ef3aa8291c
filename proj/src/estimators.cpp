#include "tvsync/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvsync/hajnal.hpp"
#include "tvsync/kernels.hpp"
#include "tvsync/rng.hpp"

namespace tvsync {

double LogGrowth::value() const {
  if (neg_inf_) throw Error(ErrorKind::NegInfArithmetic, "growth rate collapsed to -inf");
  return value_;
}

std::vector<std::size_t> default_t0_samples(std::size_t horizon, std::size_t count,
                                            std::size_t stride) {
  if (count == 0) throw Error(ErrorKind::InvalidParams, "need at least one t0 sample");
  if (stride == 0) stride = std::max<std::size_t>(horizon / 8, 1);
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = i * stride;
  return out;
}

bool curve_converged(const std::vector<double>& curve) {
  if (curve.empty()) return false;
  const std::size_t from = curve.size() - std::max<std::size_t>(curve.size() / 4, 1);
  const auto [lo, hi] = std::minmax_element(curve.begin() + static_cast<std::ptrdiff_t>(from), curve.end());
  if (*hi == 0.0) return true;
  return (*hi - *lo) < 0.1 * std::abs(*hi);
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_sampling(std::size_t horizon, const std::vector<std::size_t>& samples) {
  if (horizon < 1) throw Error(ErrorKind::InvalidParams, "horizon must be >= 1");
  if (samples.empty()) throw Error(ErrorKind::InvalidParams, "t0_samples is empty");
}

/// Walks time once from the earliest to the latest sampled window and
/// advances every window that is open at t. `shared_of` runs once per t
/// (serially); `advance` runs per open window and may run in parallel.
/// Returns log X(t0, len) per sample and window length.
template <typename State, typename SharedOf, typename Advance>
std::vector<std::vector<double>> sweep_windows(MatrixSequenceSource& source, std::size_t horizon,
                                               const std::vector<std::size_t>& samples,
                                               Execution exec, const State& init,
                                               SharedOf shared_of, Advance advance) {
  const std::size_t n = samples.size();
  std::vector<State> states(n, init);
  std::vector<std::vector<double>> logs(n, std::vector<double>(horizon, kNegInf));
  const std::size_t t_begin = *std::min_element(samples.begin(), samples.end());
  const std::size_t t_end = *std::max_element(samples.begin(), samples.end()) + horizon;
  std::vector<std::size_t> open;
  open.reserve(n);
  for (std::size_t t = t_begin; t < t_end; ++t) {
    open.clear();
    for (std::size_t s = 0; s < n; ++s)
      if (samples[s] <= t && t < samples[s] + horizon) open.push_back(s);
    if (open.empty()) continue;
    const auto shared = shared_of(source.at(t));
    const auto count = static_cast<std::ptrdiff_t>(open.size());
    const bool par = exec == Execution::Parallel && count > 1;
#pragma omp parallel for schedule(dynamic) if (par)
    for (std::ptrdiff_t a = 0; a < count; ++a) {
      const std::size_t s = open[static_cast<std::size_t>(a)];
      logs[s][t - samples[s]] = advance(states[s], shared);
    }
  }
  return logs;
}

std::vector<double> curve_from_logs(const std::vector<std::vector<double>>& logs,
                                    std::size_t horizon) {
  std::vector<double> curve(horizon, 0.0);
  for (const auto& per_sample : logs) {
    for (std::size_t k = 0; k < horizon; ++k) {
      const double lv = per_sample[k];
      if (lv == kNegInf) continue;
      curve[k] = std::max(curve[k], std::exp(lv / static_cast<double>(k + 1)));
    }
  }
  return curve;
}

// State of one window product, stored as scale * (normalized matrix).
struct ScaledProduct {
  Matrix body;
  Matrix scratch;
  double log_scale = 0.0;
  bool zero = false;

  /// Normalizes `body` by its largest entry; returns false when it vanished.
  bool renormalize() {
    const double s = body.max_abs();
    if (s == 0.0) {
      zero = true;
      return false;
    }
    body.scale(1.0 / s);
    log_scale += std::log(s);
    return true;
  }
};

// Hajnal diameter of the rows of E; the infinity norm reduces to column ranges.
double row_diameter(const Matrix& e, NormKind kind) {
  if (kind != NormKind::Inf) return diam_matrix(e, kind).value;
  double best = 0.0;
  for (std::size_t j = 0; j < e.cols(); ++j) {
    double lo = e(0, j), hi = e(0, j);
    for (std::size_t i = 1; i < e.rows(); ++i) {
      lo = std::min(lo, e(i, j));
      hi = std::max(hi, e(i, j));
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

DiamEstimate finish(std::vector<double> curve, std::size_t horizon,
                    const std::vector<std::size_t>& samples, NormKind kind) {
  DiamEstimate est;
  est.horizon = horizon;
  est.t0_samples = samples;
  est.norm = kind;
  est.converged = curve_converged(curve);
  est.value = curve.back();
  est.curve = std::move(curve);
  return est;
}

}  // namespace

DiamEstimate estimate_hajnal_diameter(MatrixSequenceSource& source, std::size_t horizon,
                                      const std::vector<std::size_t>& t0_samples, NormKind kind,
                                      Execution exec) {
  validate_sampling(horizon, t0_samples);
  const std::size_t m = source.dim();
  // Products B = G(t)...G(t0) are kept as E = B - 1 b0^T (deviation of every
  // row from row 0). diam(B) = diam(E), and E shrinks without the absolute
  // floor that forming B and differencing its rows would hit.
  ScaledProduct init;
  init.body = Matrix::identity(m);
  for (std::size_t j = 0; j < m; ++j) init.body.row(0)[j] = 0.0;
  for (std::size_t i = 1; i < m; ++i) init.body(i, 0) = -1.0;
  init.scratch = Matrix(m, m);
  init.zero = m < 2;

  const auto logs = sweep_windows(
      source, horizon, t0_samples, exec, init,
      [](const StochasticMatrix& g) { return &g.matrix(); },
      [kind, exec](ScaledProduct& st, const Matrix* g) {
        if (st.zero) return kNegInf;
        if (exec == Execution::Serial) {
          kernels::serial::deviation_step(*g, st.body, st.scratch);
        } else {
          kernels::deviation_step(*g, st.body, st.scratch);
        }
        std::swap(st.body, st.scratch);
        if (!st.renormalize()) return kNegInf;
        return st.log_scale + std::log(row_diameter(st.body, kind));
      });
  return finish(curve_from_logs(logs, horizon), horizon, t0_samples, kind);
}

double quotient_operator_norm(const ProjectionBasis& basis, const Matrix& projected,
                              NormKind kind) {
  // L = P+ M P acts on R^m, kills e0 and maps each class to the class of the
  // image; its operator norm in the quotient norm does not see the basis.
  const Matrix l = basis.lift(projected) * basis.P;
  const std::size_t m = l.rows();
  switch (kind) {
    case NormKind::Inf: {
      double best = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < m; ++k) s += std::abs(l(i, k) - l(j, k));
          best = std::max(best, s);
        }
      }
      return 0.5 * best;
    }
    case NormKind::One: {
      // unit ball is the hull of the classes of +-e_k; |[y]|_1 = sum |y - median|
      double best = 0.0;
      std::vector<double> col(m);
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) col[i] = l(i, k);
        auto mid = col.begin() + static_cast<std::ptrdiff_t>(m / 2);
        std::nth_element(col.begin(), mid, col.end());
        const double med = *mid;
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::abs(l(i, k) - med);
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::Two: {
      Matrix centered = l;
      for (std::size_t k = 0; k < m; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += l(i, k);
        mean /= static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) centered(i, k) -= mean;
      }
      return matrix_norm(centered, NormKind::Two);
    }
  }
  return 0.0;
}

DiamEstimate estimate_projection_jsr(MatrixSequenceSource& source, const ProjectionBasis& basis,
                                     std::size_t horizon,
                                     const std::vector<std::size_t>& t0_samples, NormKind kind,
                                     Execution exec) {
  validate_sampling(horizon, t0_samples);
  if (basis.m != source.dim()) throw Error(ErrorKind::DimensionMismatch, "basis and source dimensions differ");
  const std::size_t n = basis.m - 1;
  ScaledProduct init;
  init.body = Matrix::identity(n);
  init.scratch = Matrix(n, n);

  const auto logs = sweep_windows(
      source, horizon, t0_samples, exec, init,
      [&basis](const StochasticMatrix& g) { return project(g.matrix(), basis); },
      [&basis, kind, exec](ScaledProduct& st, const Matrix& ghat) {
        if (st.zero) return kNegInf;
        if (exec == Execution::Serial) {
          kernels::serial::matmul(ghat, st.body, st.scratch);
        } else {
          kernels::matmul(ghat, st.body, st.scratch);
        }
        std::swap(st.body, st.scratch);
        if (!st.renormalize()) return kNegInf;
        return st.log_scale + std::log(quotient_operator_norm(basis, st.body, kind));
      });
  return finish(curve_from_logs(logs, horizon), horizon, t0_samples, kind);
}

LyapunovEstimate estimate_sigma1(MatrixSequenceSource& source, const ProjectionBasis& basis,
                                 std::size_t horizon, std::size_t renorm_every,
                                 std::size_t n_vectors, std::uint64_t seed) {
  if (renorm_every < 1 || horizon < renorm_every) {
    throw Error(ErrorKind::InvalidParams, "need horizon >= renorm_every >= 1");
  }
  if (n_vectors < 1) throw Error(ErrorKind::InvalidParams, "need at least one probe vector");
  if (basis.m != source.dim()) throw Error(ErrorKind::DimensionMismatch, "basis and source dimensions differ");
  const std::size_t n = basis.m - 1;

  Rng rng(seed);
  Matrix v(n, n_vectors);
  for (double& x : v.data()) x = rng.normal();
  std::vector<double> acc(n_vectors, 0.0);
  std::vector<std::uint8_t> alive(n_vectors, 1);

  auto renormalize = [&] {
    std::vector<double> col(n);
    for (std::size_t c = 0; c < n_vectors; ++c) {
      if (!alive[c]) continue;
      for (std::size_t i = 0; i < n; ++i) col[i] = v(i, c);
      const double norm = vector_norm(col, NormKind::Two);
      if (norm == 0.0 || !std::isfinite(norm)) {
        alive[c] = 0;
        for (std::size_t i = 0; i < n; ++i) v(i, c) = 0.0;
        continue;
      }
      acc[c] += std::log(norm);
      for (std::size_t i = 0; i < n; ++i) v(i, c) /= norm;
    }
  };
  renormalize();
  std::fill(acc.begin(), acc.end(), 0.0);  // unit start vectors

  LyapunovEstimate est;
  est.horizon = horizon;
  est.renorm_every = renorm_every;
  Matrix y(basis.m, n_vectors);
  for (std::size_t t = 0; t < horizon; ++t) {
    const Matrix x = basis.lift(v);
    kernels::matmul(source.at(t).matrix(), x, y);
    v = basis.reduce(y);
    const double mag = v.max_abs();
    const bool extreme = mag != 0.0 && (mag < 1e-150 || mag > 1e150);
    if ((t + 1) % renorm_every == 0 || t + 1 == horizon || extreme) {
      renormalize();
      double best = LogGrowth::kNegInfRaw;
      bool any = false;
      for (std::size_t c = 0; c < n_vectors; ++c) {
        if (!alive[c]) continue;
        const double rate = acc[c] / static_cast<double>(t + 1);
        best = any ? std::max(best, rate) : rate;
        any = true;
      }
      if ((t + 1) % renorm_every == 0 || t + 1 == horizon) est.trace.emplace_back(t + 1, best);
    }
  }

  bool any = false;
  double best = 0.0;
  for (std::size_t c = 0; c < n_vectors; ++c) {
    if (!alive[c]) continue;
    const double rate = acc[c] / static_cast<double>(horizon);
    best = any ? std::max(best, rate) : rate;
    any = true;
  }
  est.value = any ? LogGrowth::finite(best) : LogGrowth::neg_inf();

  std::vector<double> tail;
  for (const auto& [t, val] : est.trace) tail.push_back(val);
  if (!any) {
    est.converged = true;
  } else if (!tail.empty()) {
    const std::size_t from = tail.size() - std::max<std::size_t>(tail.size() / 4, 1);
    const auto [lo, hi] = std::minmax_element(tail.begin() + static_cast<std::ptrdiff_t>(from), tail.end());
    est.converged = (*hi - *lo) < 0.1 * std::max(std::abs(best), 1e-3);
  }
  return est;
}

std::vector<double> lyapunov_spectrum_qr(const MatrixProducer& producer, std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorKind::InvalidParams, "horizon must be >= 1");
  Matrix first = producer(0);
  if (!first.square()) throw Error(ErrorKind::NotSquare, "QR spectrum needs square matrices");
  const std::size_t m = first.rows();
  Matrix q = Matrix::identity(m);
  std::vector<double> sums(m, 0.0);
  std::vector<double> col(m);

  for (std::size_t t = 0; t < horizon; ++t) {
    const Matrix a = t == 0 ? first : producer(t);
    if (a.rows() != m || a.cols() != m) throw Error(ErrorKind::DimensionMismatch, "producer changed dimension");
    Matrix z = a * q;
    double scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) col[i] = z(i, j);
      scale = std::max(scale, vector_norm(col, NormKind::Two));
    }
    // modified Gram-Schmidt, two passes
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) col[i] = z(i, j);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          double dot = 0.0;
          for (std::size_t i = 0; i < m; ++i) dot += q(i, k) * col[i];
          for (std::size_t i = 0; i < m; ++i) col[i] -= dot * q(i, k);
        }
      }
      const double r = vector_norm(col, NormKind::Two);
      if (!(r > 1e-14 * scale) || r == 0.0) {
        throw Error(ErrorKind::SingularMatrix, "rank-deficient frame at t=" + std::to_string(t));
      }
      sums[j] += std::log(r);
      for (std::size_t i = 0; i < m; ++i) q(i, j) = col[i] / r;
    }
  }
  for (double& s : sums) s /= static_cast<double>(horizon);
  std::sort(sums.begin(), sums.end(), std::greater<>());
  return sums;
}

double estimate_scalar_lyapunov(const ScalarFn& f, const ScalarFn& df, double s0,
                                std::size_t burn_in, std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorKind::InvalidParams, "horizon must be >= 1");
  constexpr double kBound = 1e12;
  double s = s0;
  auto check = [&](std::size_t k) {
    if (!std::isfinite(s) || std::abs(s) > kBound) {
      throw Error(ErrorKind::OrbitDiverged, "|s| exceeded 1e12 at step " + std::to_string(k));
    }
  };
  check(0);
  for (std::size_t k = 0; k < burn_in; ++k) {
    s = f(s);
    check(k + 1);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < horizon; ++k) {
    sum += std::log(std::max(std::abs(df(s)), 1e-300));
    s = f(s);
    check(burn_in + k + 1);
  }
  return sum / static_cast<double>(horizon);
}

}  // namespace tvsync
