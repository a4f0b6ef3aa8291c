#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tvsync/matrix.hpp"

namespace tvsync {

/// Bracket on the joint spectral radius of a finite set. `witness` holds the
/// word (indices into the set, first-applied first) whose spectral radius
/// certifies `lower`.
struct JsrBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t depth_reached = 0;
  std::size_t node_count = 0;
  std::vector<std::size_t> witness;
  bool converged = false;
};

/// How products are measured when pruning.
///   Inf:         plain infinity norm
///   Balanced:    infinity norm after diagonal balancing of sum |A_i|
///   Ellipsoidal: 2-norm after a similarity T with T^T T ~ sum over short
///                words of A_w^T A_w / gamma^(2|w|), gamma just above the
///                best spectral radius found on short words
enum class PruneNorm { Inf, Balanced, Ellipsoidal };

PruneNorm parse_prune_norm(const std::string& s);
std::string to_string(PruneNorm p);

struct GripenbergOptions {
  double tol = 1e-4;
  std::size_t max_len = 24;
  PruneNorm norm = PruneNorm::Ellipsoidal;
  std::size_t node_budget = 2'000'000;
};

/// Best-first branch and bound over products of the set; a branch whose norm
/// bound falls within tol of the best spectral radius is cut.
JsrBounds gripenberg(const std::vector<Matrix>& set, const GripenbergOptions& options = {});

/// Exhaustive max over all words up to max_len of rho(product)^(1/length).
/// Refuses more than 1e7 words.
double brute_force_jsr(const std::vector<Matrix>& set, std::size_t max_len);

/// Projects every member of a stochastic set (projection JSR input).
std::vector<Matrix> project_set(const std::vector<StochasticMatrix>& set, const ProjectionBasis& basis);

}  // namespace tvsync
