#include "tvsync/processes.hpp"

#include <algorithm>
#include <cmath>

namespace tvsync {

Matrix scale_free_graph(std::size_t m, std::size_t avg_degree, std::uint64_t seed) {
  if (avg_degree < 2 || avg_degree % 2 != 0 || m <= avg_degree) {
    throw Error(ErrorKind::InvalidParams, "need m > avg_degree >= 2 with avg_degree even (m=" +
                                              std::to_string(m) + ", avg_degree=" +
                                              std::to_string(avg_degree) + ")");
  }
  const std::size_t k = avg_degree / 2;
  const std::size_t m0 = k + 1;
  Matrix a(m, m);
  std::vector<std::size_t> ends;  // each edge contributes both endpoints
  ends.reserve(2 * (m0 * (m0 - 1) / 2 + k * (m - m0)));
  auto link = [&](std::size_t u, std::size_t v) {
    a(u, v) = a(v, u) = 1.0;
    ends.push_back(u);
    ends.push_back(v);
  };
  for (std::size_t i = 0; i < m0; ++i)
    for (std::size_t j = i + 1; j < m0; ++j) link(i, j);

  Rng rng(seed);
  std::vector<std::size_t> targets;
  for (std::size_t v = m0; v < m; ++v) {
    targets.clear();
    while (targets.size() < k) {
      const std::size_t u = ends[rng.below(ends.size())];
      if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
    }
    for (std::size_t u : targets) link(u, v);
  }
  return a;
}

// ---------------------------------------------------------------------------

BlinkingProcess::BlinkingProcess(Matrix base_adjacency, double p, std::size_t t_rec,
                                 std::uint64_t seed)
    : base_(std::move(base_adjacency)), p_(p), t_rec_(t_rec), seed_(seed), rng_(seed) {
  if (!base_.square() || base_.rows() == 0) throw Error(ErrorKind::InvalidParams, "base graph must be square");
  if (!(p_ >= 0.0 && p_ <= 1.0)) throw Error(ErrorKind::InvalidParams, "p must lie in [0,1]");
  if (t_rec_ < 1) throw Error(ErrorKind::InvalidParams, "t_rec must be >= 1");
  for (std::size_t i = 0; i < base_.rows(); ++i)
    for (std::size_t j = 0; j < base_.cols(); ++j)
      if (base_(i, j) != base_(j, i) || (base_(i, j) != 0.0 && base_(i, j) != 1.0)) {
        throw Error(ErrorKind::InvalidParams, "base graph must be symmetric 0/1");
      }
  reset();
}

void BlinkingProcess::reset() {
  timer_.assign(base_.rows(), 0);
  rng_ = Rng(seed_);
}

std::size_t BlinkingProcess::down_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(timer_.begin(), timer_.end(), [](std::size_t t) { return t > 0; }));
}

StochasticMatrix BlinkingProcess::next() {
  const std::size_t m = base_.rows();
  for (auto& t : timer_)
    if (t > 0) --t;
  for (std::size_t i = 0; i < m; ++i) {
    if (timer_[i] == 0 && rng_.uniform() < p_) timer_[i] = t_rec_;
  }
  Matrix a = base_;
  for (std::size_t i = 0; i < m; ++i) {
    if (timer_[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) a(i, j) = a(j, i) = 0.0;
  }
  for (std::size_t i = 0; i < m; ++i) a(i, i) = 1.0;
  return make_stochastic(a);
}

std::unique_ptr<TopologyProcess> BlinkingProcess::clone() const {
  return std::make_unique<BlinkingProcess>(*this);
}

// ---------------------------------------------------------------------------

BlurringProcess::BlurringProcess(std::size_t m, double r, std::uint64_t seed)
    : m_(m), r_(r), seed_(seed), w_(m, m), rng_(seed) {
  if (m_ < 2) throw Error(ErrorKind::InvalidParams, "blurring process needs m >= 2");
  if (!(r_ >= 0.0) || !std::isfinite(r_)) throw Error(ErrorKind::InvalidParams, "r must be >= 0");
  reset();
}

void BlurringProcess::initialize() {
  w_ = Matrix(m_, m_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = i + 1; j < m_; ++j) {
      const double weight = rng_.uniform(1.0, 2.0);
      if (rng_.uniform() < 0.5) {
        w_(i, j) = weight;
      } else {
        w_(j, i) = weight;
      }
    }
  }
}

void BlurringProcess::reset() {
  rng_ = Rng(seed_);
  initialize();
  started_ = false;
}

StochasticMatrix BlurringProcess::next() {
  if (started_ && r_ > 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i + 1; j < m_; ++j) {
        // one increment per pair on whichever orientation is live
        double& fwd = w_(i, j);
        double& rev = w_(j, i);
        double* live = fwd != 0.0 ? &fwd : (rev != 0.0 ? &rev : nullptr);
        if (!live) continue;
        *live += rng_.normal(0.0, r_);
        if (*live < 0.0) {
          double* other = live == &fwd ? &rev : &fwd;
          *other = -*live;
          *live = 0.0;
        }
      }
    }
  }
  started_ = true;
  Matrix a = w_;
  for (std::size_t i = 0; i < m_; ++i) {
    bool empty = true;
    for (double v : a.row(i)) empty = empty && v == 0.0;
    if (empty) a(i, i) = 1.0;
  }
  return make_stochastic(a);
}

std::unique_ptr<TopologyProcess> BlurringProcess::clone() const {
  return std::make_unique<BlurringProcess>(*this);
}

}  // namespace tvsync
