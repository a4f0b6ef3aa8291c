#pragma once

// Dense inner loops used by the products, estimators and the CML update.
// Each kernel has a serial reference and an OpenMP version; both compute every
// output entry with the same operation order, so results are bitwise equal.
// The dispatching entry points pick the parallel path above a size threshold.

#include <span>

#include "tvsync/matrix.hpp"

namespace tvsync::kernels {

/// Work (rows * inner * cols) above which the dispatchers go parallel.
inline constexpr std::size_t kParallelWork = 1u << 16;

namespace serial {
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
/// out = G E - 1 (G E)_0 : one left multiplication of a product kept in
/// deviation-from-row-0 form.
void deviation_step(const Matrix& g, const Matrix& e, Matrix& out);
/// out_i = sum_j G_ij (y_j - y_0) + y_0
void anchored_matvec(const Matrix& g, std::span<const double> y, std::span<double> out);
}  // namespace serial

namespace omp {
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
void deviation_step(const Matrix& g, const Matrix& e, Matrix& out);
void anchored_matvec(const Matrix& g, std::span<const double> y, std::span<double> out);
}  // namespace omp

void matmul(const Matrix& a, const Matrix& b, Matrix& out);
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
void deviation_step(const Matrix& g, const Matrix& e, Matrix& out);
void anchored_matvec(const Matrix& g, std::span<const double> y, std::span<double> out);

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads() noexcept;

}  // namespace tvsync::kernels
