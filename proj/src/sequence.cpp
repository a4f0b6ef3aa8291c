#include "tvsync/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tvsync/kernels.hpp"
#include "tvsync/rng.hpp"

namespace tvsync {

namespace {

std::size_t common_dim(const std::vector<StochasticMatrix>& ms, const char* what) {
  if (ms.empty()) throw Error(ErrorKind::EmptyList, std::string(what) + " is empty");
  const std::size_t m = ms.front().dim();
  for (const auto& g : ms) {
    if (g.dim() != m) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " dimensions differ");
  }
  return m;
}

}  // namespace

MatrixSequenceSource MatrixSequenceSource::make_static(StochasticMatrix g) {
  const std::size_t m = g.dim();
  return MatrixSequenceSource(Static{std::move(g)}, m);
}

MatrixSequenceSource MatrixSequenceSource::make_periodic(std::vector<StochasticMatrix> cycle) {
  const std::size_t m = common_dim(cycle, "periodic cycle");
  return MatrixSequenceSource(Periodic{std::move(cycle)}, m);
}

MatrixSequenceSource MatrixSequenceSource::make_finite_set(std::vector<StochasticMatrix> set,
                                                           std::vector<double> weights,
                                                           std::uint64_t seed) {
  const std::size_t m = common_dim(set, "finite set");
  if (weights.empty()) weights.assign(set.size(), 1.0);
  if (weights.size() != set.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weights and matrices differ in count");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidParams, "negative weight");
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorKind::InvalidParams, "weights sum to zero");
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i] / total;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;
  return MatrixSequenceSource(FiniteSet{std::move(set), std::move(cumulative), seed}, m);
}

MatrixSequenceSource MatrixSequenceSource::make_driven(std::unique_ptr<TopologyProcess> process,
                                                       std::size_t cache_capacity) {
  if (!process) throw Error(ErrorKind::InvalidParams, "null process");
  const std::size_t m = process->dim();
  Driven d;
  d.process = std::move(process);
  d.process->reset();
  d.capacity = std::max<std::size_t>(cache_capacity, 1);
  return MatrixSequenceSource(std::move(d), m);
}

MatrixSequenceSource::Variant MatrixSequenceSource::copy_variant(const Variant& v) {
  return std::visit(
      [](const auto& alt) -> Variant {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, Driven>) {
          Driven d;
          d.process = alt.process->clone();
          d.process->reset();
          d.capacity = alt.capacity;
          return d;
        } else {
          return alt;
        }
      },
      v);
}

MatrixSequenceSource::MatrixSequenceSource(const MatrixSequenceSource& other)
    : v_(copy_variant(other.v_)), m_(other.m_) {}

MatrixSequenceSource& MatrixSequenceSource::operator=(const MatrixSequenceSource& other) {
  if (this != &other) {
    v_ = copy_variant(other.v_);
    m_ = other.m_;
  }
  return *this;
}

bool MatrixSequenceSource::immutable() const noexcept {
  return !std::holds_alternative<Driven>(v_);
}

std::string MatrixSequenceSource::variant_name() const {
  switch (v_.index()) {
    case 0: return "static";
    case 1: return "periodic";
    case 2: return "finite_set";
    default: return std::get<Driven>(v_).process->name();
  }
}

std::size_t MatrixSequenceSource::finite_set_index(std::size_t t) const {
  const auto* fs = std::get_if<FiniteSet>(&v_);
  if (!fs) throw Error(ErrorKind::InvalidParams, "not a finite-set source");
  const double u = to_unit(keyed_u64(fs->seed, t));
  const auto it = std::upper_bound(fs->cumulative.begin(), fs->cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - fs->cumulative.begin()),
                               fs->set.size() - 1);
}

const StochasticMatrix& MatrixSequenceSource::at(std::size_t t) {
  switch (v_.index()) {
    case 0: return std::get<Static>(v_).g;
    case 1: {
      const auto& p = std::get<Periodic>(v_);
      return p.cycle[t % p.cycle.size()];
    }
    case 2: return std::get<FiniteSet>(v_).set[finite_set_index(t)];
    default: break;
  }
  auto& d = std::get<Driven>(v_);
  if (t < d.base) {
    if (!d.process->rewindable()) {
      throw Error(ErrorKind::ProcessExhausted,
                  "t=" + std::to_string(t) + " precedes the retained window");
    }
    d.process->reset();
    d.cache.clear();
    d.base = 0;
  }
  while (t >= d.base + d.cache.size()) {
    d.cache.push_back(d.process->next());
    if (d.cache.size() > d.capacity) {
      d.cache.pop_front();
      ++d.base;
    }
  }
  return d.cache[t - d.base];
}

namespace {

void renormalize_rows(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const double s = std::accumulate(r.begin(), r.end(), 0.0);
    if (s > 0.0)
      for (double& v : r) v /= s;
  }
}

}  // namespace

WindowProduct window_product(MatrixSequenceSource& source, std::size_t t0, std::size_t length) {
  WindowProduct w{t0, length, Matrix::identity(source.dim())};
  Matrix next(source.dim(), source.dim());
  for (std::size_t k = 0; k < length; ++k) {
    kernels::matmul(source.at(t0 + k).matrix(), w.product, next);
    std::swap(w.product, next);
    if ((k + 1) % kRenormalizeEvery == 0) renormalize_rows(w.product);
  }
  return w;
}

Matrix left_product(const std::vector<StochasticMatrix>& matrices) {
  if (matrices.empty()) throw Error(ErrorKind::EmptyList, "empty product");
  Matrix p = matrices.front().matrix();
  for (std::size_t k = 1; k < matrices.size(); ++k) p = matrices[k].matrix() * p;
  return p;
}

}  // namespace tvsync
