// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <vector>

#include "tvsync/kernels.hpp"
#include "tvsync/processes.hpp"
#include "tvsync/rng.hpp"

namespace {

using tvsync::Matrix;

Matrix random_stochastic(std::size_t m, std::uint64_t seed) {
  tvsync::Rng rng(seed);
  Matrix a(m, m);
  for (double& v : a.data()) v = rng.uniform();
  return tvsync::make_stochastic(a).matrix();
}

template <void (*Kernel)(const Matrix&, const Matrix&, Matrix&)>
void matrix_kernel(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Matrix g = random_stochastic(m, 1), e = random_stochastic(m, 2);
  Matrix out(m, m);
  for (auto _ : state) {
    Kernel(g, e, out);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m * m * m));
}

template <void (*Kernel)(const Matrix&, std::span<const double>, std::span<double>)>
void vector_kernel(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Matrix g = random_stochastic(m, 3);
  std::vector<double> y(m), out(m);
  tvsync::Rng rng(4);
  for (double& v : y) v = rng.uniform();
  for (auto _ : state) {
    Kernel(g, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m * m));
}

}  // namespace

BENCHMARK(matrix_kernel<tvsync::kernels::serial::matmul>)->Name("matmul/serial")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(matrix_kernel<tvsync::kernels::omp::matmul>)->Name("matmul/omp")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(matrix_kernel<tvsync::kernels::serial::deviation_step>)->Name("deviation_step/serial")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(matrix_kernel<tvsync::kernels::omp::deviation_step>)->Name("deviation_step/omp")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(vector_kernel<tvsync::kernels::serial::anchored_matvec>)->Name("anchored_matvec/serial")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(vector_kernel<tvsync::kernels::omp::anchored_matvec>)->Name("anchored_matvec/omp")->RangeMultiplier(4)->Range(64, 2048);

BENCHMARK_MAIN();
