#include <doctest.h>

#include "support/fixtures.hpp"
#include "tvsync/processes.hpp"
#include "tvsync/sequence.hpp"

using namespace tvsync;

namespace {

const auto kA = make_stochastic(Matrix{{0.9, 0.1}, {0.3, 0.7}});
const auto kB = make_stochastic(Matrix{{0.2, 0.8}, {0.6, 0.4}});

// Emits diag-heavy matrices tagged by a counter; optionally refuses to rewind.
class Counter final : public TopologyProcess {
 public:
  explicit Counter(bool rewindable) : rewindable_(rewindable) {}
  std::size_t dim() const override { return 2; }
  StochasticMatrix next() override {
    const double w = 1.0 / static_cast<double>(2 + n_++);
    return make_stochastic(Matrix{{1 - w, w}, {w, 1 - w}});
  }
  void reset() override { n_ = 0; }
  bool rewindable() const override { return rewindable_; }
  std::unique_ptr<TopologyProcess> clone() const override { return std::make_unique<Counter>(*this); }
  std::string name() const override { return "counter"; }

 private:
  bool rewindable_;
  std::size_t n_ = 0;
};

}  // namespace

TEST_CASE("static and periodic lookup") {
  auto s = MatrixSequenceSource::make_static(kA);
  CHECK(s.at(0) == kA);
  CHECK(s.at(12345) == kA);
  CHECK(s.immutable());
  CHECK(s.variant_name() == "static");

  auto p = MatrixSequenceSource::make_periodic({kA, kB});
  CHECK(p.at(3) == kB);
  CHECK(p.at(4) == kA);
  CHECK_THROWS_AS(MatrixSequenceSource::make_periodic({}), Error);
  CHECK_THROWS_AS(MatrixSequenceSource::make_periodic({kA, make_stochastic(Matrix::identity(3))}), Error);
}

TEST_CASE("finite set draws are keyed and weighted") {
  auto f = MatrixSequenceSource::make_finite_set({kA, kB}, {}, 42);
  auto g = f;
  for (std::size_t t : {0u, 7u, 1000u, 3u}) {
    CHECK(f.at(t) == f.at(t));
    CHECK(f.at(t) == g.at(t));
  }
  auto other = MatrixSequenceSource::make_finite_set({kA, kB}, {}, 43);
  int differ = 0;
  for (std::size_t t = 0; t < 64; ++t) differ += f.finite_set_index(t) != other.finite_set_index(t);
  CHECK(differ > 10);

  auto skewed = MatrixSequenceSource::make_finite_set({kA, kB}, {1.0, 3.0}, 9);
  std::size_t hits = 0;
  const std::size_t n = 40000;
  for (std::size_t t = 0; t < n; ++t) hits += skewed.finite_set_index(t);
  // binomial(n, 0.75): 5 sigma band
  const double sd = std::sqrt(n * 0.75 * 0.25);
  CHECK(std::abs(static_cast<double>(hits) - 0.75 * n) < 5 * sd);

  auto never = MatrixSequenceSource::make_finite_set({kA, kB}, {0.0, 1.0}, 1);
  for (std::size_t t = 0; t < 200; ++t) CHECK(never.finite_set_index(t) == 1);

  CHECK_THROWS_AS(MatrixSequenceSource::make_finite_set({kA, kB}, {1.0}, 1), Error);
  CHECK_THROWS_AS(MatrixSequenceSource::make_finite_set({kA, kB}, {-1.0, 2.0}, 1), Error);
  CHECK_THROWS_AS(MatrixSequenceSource::make_finite_set({kA, kB}, {0.0, 0.0}, 1), Error);
}

TEST_CASE("window product order and edge cases") {
  auto s = MatrixSequenceSource::make_static(kA);
  CHECK(window_product(s, 5, 0).product == Matrix::identity(2));
  CHECK(max_abs_diff(window_product(s, 0, 2).product, kA.matrix() * kA.matrix()) < 1e-15);

  auto p = MatrixSequenceSource::make_periodic({kA, kB});
  CHECK(max_abs_diff(window_product(p, 0, 2).product, kB.matrix() * kA.matrix()) < 1e-15);
  CHECK(max_abs_diff(window_product(p, 1, 2).product, kA.matrix() * kB.matrix()) < 1e-15);
  CHECK(max_abs_diff(left_product({kA, kB}), kB.matrix() * kA.matrix()) < 1e-15);
  CHECK_THROWS_AS(left_product({}), Error);
}

TEST_CASE("window products compose and stay stochastic") {
  Rng rng(6);
  std::vector<StochasticMatrix> set;
  for (int k = 0; k < 4; ++k) set.push_back(fixtures::random_stochastic(rng, 5, 0.3));
  auto f = MatrixSequenceSource::make_finite_set(set, {}, 3);
  for (auto [a, b] : {std::pair<std::size_t, std::size_t>{3, 5}, {64, 70}, {100, 1}}) {
    const auto whole = window_product(f, 11, a + b).product;
    const auto split = window_product(f, 11 + a, b).product * window_product(f, 11, a).product;
    CHECK(max_abs_diff(whole, split) <= 1e-10 * static_cast<double>(a + b));
    CHECK_NOTHROW(StochasticMatrix::validated(whole, 1e-12 * static_cast<double>(a + b)));
  }
}

TEST_CASE("driven sources cache and rewind") {
  auto d = MatrixSequenceSource::make_driven(std::make_unique<Counter>(true), 4);
  CHECK_FALSE(d.immutable());
  CHECK(d.variant_name() == "counter");
  const StochasticMatrix m10 = d.at(10);
  const StochasticMatrix m2 = d.at(2);  // behind the cache: replays from reset
  CHECK(d.at(10) == m10);
  CHECK(m2(0, 1) == doctest::Approx(0.25));
  CHECK(m10(0, 1) == doctest::Approx(1.0 / 12.0));

  auto copy = d;
  CHECK(copy.at(10) == m10);

  auto once = MatrixSequenceSource::make_driven(std::make_unique<Counter>(false), 4);
  (void)once.at(10);
  try {
    (void)once.at(0);
    FAIL("expected ProcessExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProcessExhausted);
  }
}

TEST_CASE("driven blinking source matches its process") {
  const Matrix base = scale_free_graph(30, 4, 5);
  BlinkingProcess proc(base, 0.2, 3, 8);
  auto d = MatrixSequenceSource::make_driven(std::make_unique<BlinkingProcess>(proc), 16);
  std::vector<StochasticMatrix> direct;
  for (int t = 0; t < 40; ++t) direct.push_back(proc.next());
  for (std::size_t t = 0; t < 40; ++t) CHECK(d.at(t) == direct[t]);
  CHECK(d.at(3) == direct[3]);
}
