#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tvsync/matrix.hpp"

namespace tvsync {

/// A sequential, seeded producer of coupling matrices. Implementations are
/// path dependent; reset() must restore the exact t = 0 state.
class TopologyProcess {
 public:
  virtual ~TopologyProcess() = default;
  virtual std::size_t dim() const = 0;
  /// Emits the matrix for the next time index and advances the state.
  virtual StochasticMatrix next() = 0;
  virtual void reset() = 0;
  virtual bool rewindable() const { return true; }
  virtual std::unique_ptr<TopologyProcess> clone() const = 0;
  virtual std::string name() const = 0;
};

/// The sequence {G(t)}, t >= 0. Static, Periodic and FiniteSetIID are
/// immutable and safe for concurrent reads; Driven is single-owner (it caches
/// emitted matrices and rewinds by replaying its process from the seed).
class MatrixSequenceSource {
 public:
  static MatrixSequenceSource make_static(StochasticMatrix g);
  static MatrixSequenceSource make_periodic(std::vector<StochasticMatrix> cycle);
  static MatrixSequenceSource make_finite_set(std::vector<StochasticMatrix> set,
                                              std::vector<double> weights, std::uint64_t seed);
  static MatrixSequenceSource make_driven(std::unique_ptr<TopologyProcess> process,
                                          std::size_t cache_capacity = 1024);

  MatrixSequenceSource(const MatrixSequenceSource& other);
  MatrixSequenceSource& operator=(const MatrixSequenceSource& other);
  MatrixSequenceSource(MatrixSequenceSource&&) noexcept = default;
  MatrixSequenceSource& operator=(MatrixSequenceSource&&) noexcept = default;
  ~MatrixSequenceSource() = default;

  std::size_t dim() const noexcept { return m_; }
  bool immutable() const noexcept;
  std::string variant_name() const;

  /// G(t). For Driven sources the reference stays valid until the next call.
  const StochasticMatrix& at(std::size_t t);

  /// Index into the FiniteSetIID set drawn for time t.
  std::size_t finite_set_index(std::size_t t) const;

 private:
  struct Static {
    StochasticMatrix g;
  };
  struct Periodic {
    std::vector<StochasticMatrix> cycle;
  };
  struct FiniteSet {
    std::vector<StochasticMatrix> set;
    std::vector<double> cumulative;
    std::uint64_t seed = 0;
  };
  struct Driven {
    std::unique_ptr<TopologyProcess> process;
    std::deque<StochasticMatrix> cache;
    std::size_t base = 0;
    std::size_t capacity = 1024;
  };
  using Variant = std::variant<Static, Periodic, FiniteSet, Driven>;

  MatrixSequenceSource(Variant v, std::size_t m) : v_(std::move(v)), m_(m) {}
  static Variant copy_variant(const Variant& v);

  Variant v_;
  std::size_t m_ = 0;
};

/// G(t0+t-1) ... G(t0+1) G(t0): later times multiply on the left.
struct WindowProduct {
  std::size_t t0 = 0;
  std::size_t length = 0;
  Matrix product;
};

inline constexpr std::size_t kRenormalizeEvery = 64;

WindowProduct window_product(MatrixSequenceSource& source, std::size_t t0, std::size_t length);

/// Left product of an explicit list, first element applied first.
Matrix left_product(const std::vector<StochasticMatrix>& matrices);

}  // namespace tvsync
