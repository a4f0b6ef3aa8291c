#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tvsync/matrix.hpp"
#include "tvsync/sequence.hpp"

namespace tvsync {

enum class Execution { Serial, Parallel };

/// Log-scale growth rate, or the collapsed-to-zero sentinel. The sentinel is
/// stored as -1e9 with a flag; value() refuses to hand it out for arithmetic.
class LogGrowth {
 public:
  static constexpr double kNegInfRaw = -1e9;

  static LogGrowth finite(double v) { return LogGrowth(v, false); }
  static LogGrowth neg_inf() { return LogGrowth(kNegInfRaw, true); }

  bool is_neg_inf() const noexcept { return neg_inf_; }
  double value() const;
  /// The stored number, sentinel included; for serialization only.
  double raw() const noexcept { return value_; }

  friend bool operator==(const LogGrowth&, const LogGrowth&) = default;

 private:
  LogGrowth(double v, bool flag) : value_(v), neg_inf_(flag) {}
  double value_;
  bool neg_inf_;
};

/// Finite-horizon estimate of sup_t0 X(t0, t)^(1/t), with X the Hajnal
/// diameter of window products (or the norm of projected products).
struct DiamEstimate {
  double value = 0.0;
  std::size_t horizon = 0;
  std::vector<std::size_t> t0_samples;
  /// curve[t-1] = max over sampled t0 of X(t0, t)^(1/t)
  std::vector<double> curve;
  /// last quartile of the curve spreads by less than 10%
  bool converged = false;
  NormKind norm = NormKind::Inf;
};

struct LyapunovEstimate {
  LogGrowth value = LogGrowth::neg_inf();
  std::size_t horizon = 0;
  std::size_t renorm_every = 8;
  /// (t, running per-step average) at every renormalization
  std::vector<std::pair<std::size_t, double>> trace;
  bool converged = false;
};

/// {0, s, 2s, ..., (count-1)s}; stride 0 means horizon/8 (at least 1).
std::vector<std::size_t> default_t0_samples(std::size_t horizon, std::size_t count = 16,
                                            std::size_t stride = 0);

/// True when the last quartile of `curve` spans less than 10% of its maximum.
bool curve_converged(const std::vector<double>& curve);

DiamEstimate estimate_hajnal_diameter(MatrixSequenceSource& source, std::size_t horizon,
                                      const std::vector<std::size_t>& t0_samples,
                                      NormKind kind = NormKind::Inf,
                                      Execution exec = Execution::Parallel);

/// Operator norm of a projected matrix measured in the quotient norm of
/// R^m / span{e0} induced by `kind`; independent of the basis.
double quotient_operator_norm(const ProjectionBasis& basis, const Matrix& projected, NormKind kind);

DiamEstimate estimate_projection_jsr(MatrixSequenceSource& source, const ProjectionBasis& basis,
                                     std::size_t horizon,
                                     const std::vector<std::size_t>& t0_samples,
                                     NormKind kind = NormKind::Inf,
                                     Execution exec = Execution::Parallel);

/// Largest projection Lyapunov exponent from t0 = 0: random probe vectors are
/// pushed through the projected matrices and renormalized every
/// `renorm_every` steps. All probes collapsing yields the sentinel.
LyapunovEstimate estimate_sigma1(MatrixSequenceSource& source, const ProjectionBasis& basis,
                                 std::size_t horizon, std::size_t renorm_every = 8,
                                 std::size_t n_vectors = 8, std::uint64_t seed = 0);

using MatrixProducer = std::function<Matrix(std::size_t)>;

/// Full Lyapunov spectrum of the product of producer(0), producer(1), ... by
/// QR re-orthonormalization; descending.
std::vector<double> lyapunov_spectrum_qr(const MatrixProducer& producer, std::size_t horizon);

using ScalarFn = std::function<double(double)>;

/// Orbit average of log|f'(s(k))| after `burn_in` discarded iterates.
/// |f'| is floored at 1e-300.
double estimate_scalar_lyapunov(const ScalarFn& f, const ScalarFn& df, double s0,
                                std::size_t burn_in, std::size_t horizon);

}  // namespace tvsync
