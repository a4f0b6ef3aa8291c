#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tvsync/matrix.hpp"
#include "tvsync/rng.hpp"
#include "tvsync/sequence.hpp"

namespace tvsync {

/// Symmetric 0/1 preferential-attachment graph: a clique on avg_degree/2 + 1
/// seed vertices, then every arriving vertex links to avg_degree/2 distinct
/// existing vertices chosen proportionally to degree. Zero diagonal.
Matrix scale_free_graph(std::size_t m, std::size_t avg_degree, std::uint64_t seed);

/// Vertex failure and recovery on a fixed base graph.
///
/// Each step: positive down-timers are decremented, then every up vertex
/// fails with probability p (timer := t_rec). Down vertices lose all their
/// edges in both directions; recovery restores every base edge at once. The
/// emitted coupling is the row-normalized adjacency with unit diagonal.
class BlinkingProcess final : public TopologyProcess {
 public:
  BlinkingProcess(Matrix base_adjacency, double p, std::size_t t_rec, std::uint64_t seed);

  std::size_t dim() const override { return base_.rows(); }
  StochasticMatrix next() override;
  void reset() override;
  std::unique_ptr<TopologyProcess> clone() const override;
  std::string name() const override { return "blinking"; }

  const std::vector<std::size_t>& down_timer() const noexcept { return timer_; }
  std::size_t down_count() const noexcept;
  const Matrix& base_adjacency() const noexcept { return base_; }

 private:
  Matrix base_;
  double p_;
  std::size_t t_rec_;
  std::uint64_t seed_;
  std::vector<std::size_t> timer_;
  Rng rng_;
};

/// Directed weights following a reflected Wiener walk with orientation flips.
///
/// Every unordered pair carries at most one live orientation. Initially each
/// pair gets a weight uniform in [1, 2] on an orientation picked by a fair
/// coin. Each step the live weight receives one N(0, r^2) increment; a
/// negative result moves |w| to the reversed edge. Rows without any incoming
/// weight get a unit self-loop in the emitted matrix only.
class BlurringProcess final : public TopologyProcess {
 public:
  BlurringProcess(std::size_t m, double r, std::uint64_t seed);

  std::size_t dim() const override { return m_; }
  StochasticMatrix next() override;
  void reset() override;
  std::unique_ptr<TopologyProcess> clone() const override;
  std::string name() const override { return "blurring"; }

  /// Current weights; weights()(i, j) is the influence of j on i.
  const Matrix& weights() const noexcept { return w_; }

 private:
  void initialize();

  std::size_t m_;
  double r_;
  std::uint64_t seed_;
  Matrix w_;
  Rng rng_;
  bool started_ = false;
};

}  // namespace tvsync
