#include "tvsync/kernels.hpp"

#include <cassert>

#ifdef TVSYNC_HAVE_OPENMP
#include <omp.h>
#endif

namespace tvsync::kernels {

namespace {

// Row i of A*B. Shared by both paths so the operation order is identical.
inline void matmul_row(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i) {
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  double* dst = out.row(i).data();
  for (std::size_t j = 0; j < n; ++j) dst[j] = 0.0;
  for (std::size_t k = 0; k < inner; ++k) {
    const double aik = a(i, k);
    if (aik == 0.0) continue;
    const double* src = b.row(k).data();
    for (std::size_t j = 0; j < n; ++j) dst[j] += aik * src[j];
  }
}

inline double dot_row(const Matrix& a, std::size_t i, std::span<const double> x) {
  double s = 0.0;
  const double* r = a.row(i).data();
  for (std::size_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
  return s;
}

inline double anchored_row(const Matrix& g, std::size_t i, std::span<const double> y) {
  const double y0 = y[0];
  double s = 0.0;
  const double* r = g.row(i).data();
  for (std::size_t j = 1; j < g.cols(); ++j) s += r[j] * (y[j] - y0);
  return y0 + s;
}

void prepare(const Matrix& a, const Matrix& b, Matrix& out) {
  assert(a.cols() == b.rows());
  if (out.rows() != a.rows() || out.cols() != b.cols()) out = Matrix(a.rows(), b.cols());
}

}  // namespace

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  prepare(a, b, out);
  for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, out, i);
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot_row(a, i, x);
}

void deviation_step(const Matrix& g, const Matrix& e, Matrix& out) {
  matmul(g, e, out);
  const std::size_t n = out.cols();
  std::vector<double> base(out.row(0).begin(), out.row(0).end());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double* r = out.row(i).data();
    for (std::size_t j = 0; j < n; ++j) r[j] -= base[j];
  }
}

void anchored_matvec(const Matrix& g, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < g.rows(); ++i) out[i] = anchored_row(g, i, y);
}

}  // namespace serial

namespace omp {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  prepare(a, b, out);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) matmul_row(a, b, out, static_cast<std::size_t>(i));
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    out[static_cast<std::size_t>(i)] = dot_row(a, static_cast<std::size_t>(i), x);
  }
}

void deviation_step(const Matrix& g, const Matrix& e, Matrix& out) {
  matmul(g, e, out);
  const std::size_t n = out.cols();
  std::vector<double> base(out.row(0).begin(), out.row(0).end());
  const auto rows = static_cast<std::ptrdiff_t>(out.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double* r = out.row(static_cast<std::size_t>(i)).data();
    for (std::size_t j = 0; j < n; ++j) r[j] -= base[j];
  }
}

void anchored_matvec(const Matrix& g, std::span<const double> y, std::span<double> out) {
  const auto rows = static_cast<std::ptrdiff_t>(g.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    out[static_cast<std::size_t>(i)] = anchored_row(g, static_cast<std::size_t>(i), y);
  }
}

}  // namespace omp

namespace {
bool go_parallel(std::size_t work) {
#ifdef TVSYNC_HAVE_OPENMP
  return work >= kParallelWork && omp_get_max_threads() > 1 && !omp_in_parallel();
#else
  (void)work;
  return false;
#endif
}
}  // namespace

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  if (go_parallel(a.rows() * a.cols() * b.cols())) {
    omp::matmul(a, b, out);
  } else {
    serial::matmul(a, b, out);
  }
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  if (go_parallel(a.rows() * a.cols() * 16)) {
    omp::matvec(a, x, out);
  } else {
    serial::matvec(a, x, out);
  }
}

void deviation_step(const Matrix& g, const Matrix& e, Matrix& out) {
  if (go_parallel(g.rows() * g.cols() * e.cols())) {
    omp::deviation_step(g, e, out);
  } else {
    serial::deviation_step(g, e, out);
  }
}

void anchored_matvec(const Matrix& g, std::span<const double> y, std::span<double> out) {
  if (go_parallel(g.rows() * g.cols() * 16)) {
    omp::anchored_matvec(g, y, out);
  } else {
    serial::anchored_matvec(g, y, out);
  }
}

int max_threads() noexcept {
#ifdef TVSYNC_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tvsync::kernels
