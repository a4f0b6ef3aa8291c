#pragma once

#include "tvsync/matrix.hpp"

namespace tvsync {

/// Entries above this count as positive in scrambling tests.
inline constexpr double kPositiveThreshold = 1e-12;

struct DiamValue {
  double value = 0.0;
  NormKind norm_kind = NormKind::Inf;
};

/// Hajnal diameter: max over row pairs of |g_i - g_j| in the chosen vector
/// norm. For an m x 1 column this is the state diameter max|x_i - x_j|.
DiamValue diam_matrix(const Matrix& l, NormKind kind = NormKind::Inf);

/// Scramblingness: min over row pairs of sum_k min(G_ik, G_jk). Terms at or
/// below kPositiveThreshold count as zero, so eta > 0 iff is_scrambling.
double eta(const StochasticMatrix& g);

bool is_scrambling(const StochasticMatrix& g);

struct HajnalCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// diam(G H) against (1 - eta(G)) diam(H), with 1e-10 slack.
HajnalCheck hajnal_bound_check(const StochasticMatrix& g, const StochasticMatrix& h,
                               NormKind kind = NormKind::Inf);

}  // namespace tvsync
