#include "tvsync/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tvsync/kernels.hpp"

namespace tvsync {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotRowSumConstant: return "NotRowSumConstant";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ProcessExhausted: return "ProcessExhausted";
    case ErrorKind::AllVectorsCollapsed: return "AllVectorsCollapsed";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::OrbitDiverged: return "OrbitDiverged";
    case ErrorKind::StateDiverged: return "StateDiverged";
    case ErrorKind::DegenerateDimension: return "DegenerateDimension";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnknownParameter: return "UnknownParameter";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NegInfArithmetic: return "NegInfArithmetic";
  }
  return "Unknown";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "inf") return NormKind::Inf;
  if (name == "one") return NormKind::One;
  if (name == "two") return NormKind::Two;
  throw Error(ErrorKind::InvalidConfig, "unknown norm '" + std::string(name) + "'");
}

std::string_view to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::Inf: return "inf";
    case NormKind::One: return "one";
    case NormKind::Two: return "two";
  }
  return "inf";
}

BasisKind parse_basis_kind(std::string_view name) {
  if (name == "difference") return BasisKind::Difference;
  if (name == "orthonormal") return BasisKind::Orthonormal;
  throw Error(ErrorKind::InvalidConfig, "unknown basis '" + std::string(name) + "'");
}

std::string_view to_string(BasisKind kind) noexcept {
  return kind == BasisKind::Difference ? "difference" : "orthonormal";
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw Error(ErrorKind::NonFinite, "fill value");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::DimensionMismatch, "data has " + std::to_string(data_.size()) +
                                                  " entries, expected " +
                                                  std::to_string(rows_ * cols_));
  }
  if (!all_finite()) throw Error(ErrorKind::NonFinite, "matrix data");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) throw Error(ErrorKind::NonFinite, "matrix data");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

void Matrix::scale(double factor) noexcept {
  for (double& v : data_) v *= factor;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "product of " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " and " +
                                                  std::to_string(b.rows()) + "x" +
                                                  std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  kernels::matmul(a, b, out);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "difference of unequal shapes");
  }
  Matrix out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= src[k];
  return out;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  std::vector<double> out(a.rows());
  kernels::matvec(a, x, out);
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "max_abs_diff of unequal shapes");
  }
  double best = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    best = std::max(best, std::abs(a.data()[k] - b.data()[k]));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Stochastic matrices

namespace {

void require_square(const Matrix& m) {
  if (!m.square() || m.rows() == 0) {
    throw Error(ErrorKind::NotSquare,
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
  }
}

void require_nonnegative(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0.0) {
        throw Error(ErrorKind::NegativeEntry,
                    "(" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
}

double row_sum(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v;
  return s;
}

}  // namespace

StochasticMatrix StochasticMatrix::validated(Matrix m, double tol) {
  require_square(m);
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "stochastic candidate");
  require_nonnegative(m);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double s = row_sum(m.row(i));
    if (std::abs(s - 1.0) > tol) {
      throw Error(ErrorKind::NotStochastic,
                  "row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix make_stochastic(const Matrix& raw) {
  require_square(raw);
  require_nonnegative(raw);
  Matrix out = raw;
  const double keep_tol = 8.0 * static_cast<double>(raw.cols()) *
                          std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    const double s = row_sum(r);
    if (s <= 0.0) throw Error(ErrorKind::ZeroRow, "row " + std::to_string(i));
    if (std::abs(s - 1.0) <= keep_tol) continue;
    for (double& v : r) v /= s;
  }
  return StochasticMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Projection

ProjectionBasis projection_basis(std::size_t m, BasisKind kind) {
  if (m < 2) throw Error(ErrorKind::DimensionTooSmall, "projection needs m >= 2");
  ProjectionBasis b;
  b.m = m;
  b.kind = kind;
  b.P = Matrix(m - 1, m);
  if (kind == BasisKind::Difference) {
    // rows e_i - e_{i+1}; right inverse has ones on and above the diagonal
    b.Pplus = Matrix(m, m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      b.P(i, i) = 1.0;
      b.P(i, i + 1) = -1.0;
      for (std::size_t k = 0; k <= i; ++k) b.Pplus(k, i) = 1.0;
    }
  } else {
    // Helmert rows: (1,...,1,-k,0,...)/sqrt(k(k+1))
    for (std::size_t r = 0; r + 1 < m; ++r) {
      const double k = static_cast<double>(r + 1);
      const double c = 1.0 / std::sqrt(k * (k + 1.0));
      for (std::size_t j = 0; j <= r; ++j) b.P(r, j) = c;
      b.P(r, r + 1) = -k * c;
    }
    b.Pplus = b.P.transposed();
  }
  return b;
}

Matrix ProjectionBasis::lift(const Matrix& v) const {
  if (v.rows() != m - 1) throw Error(ErrorKind::DimensionMismatch, "lift expects m-1 rows");
  if (kind == BasisKind::Orthonormal) return Pplus * v;
  // suffix sums: (P+ v)_k = sum_{i >= k} v_i, last row zero
  Matrix out(m, v.cols());
  for (std::size_t k = m - 1; k-- > 0;) {
    auto dst = out.row(k);
    auto below = out.row(k + 1);
    auto src = v.row(k);
    for (std::size_t j = 0; j < v.cols(); ++j) dst[j] = below[j] + src[j];
  }
  return out;
}

Matrix ProjectionBasis::reduce(const Matrix& x) const {
  if (x.rows() != m) throw Error(ErrorKind::DimensionMismatch, "reduce expects m rows");
  if (kind == BasisKind::Orthonormal) return P * x;
  Matrix out(m - 1, x.cols());
  for (std::size_t i = 0; i + 1 < m; ++i) {
    auto dst = out.row(i);
    auto a = x.row(i);
    auto b = x.row(i + 1);
    for (std::size_t j = 0; j < x.cols(); ++j) dst[j] = a[j] - b[j];
  }
  return out;
}

double common_row_sum(const Matrix& l) {
  require_square(l);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double norm = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) {
    double s = 0.0, a = 0.0;
    for (double v : l.row(i)) {
      s += v;
      a += std::abs(v);
    }
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    norm = std::max(norm, a);
  }
  if (hi - lo > kRowSumConstancyTol * std::max(1.0, norm)) {
    throw Error(ErrorKind::NotRowSumConstant,
                "row sums span [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return 0.5 * (lo + hi);
}

Matrix project(const Matrix& l, const ProjectionBasis& basis) {
  if (l.rows() != basis.m || l.cols() != basis.m) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimension differs from basis");
  }
  common_row_sum(l);
  Matrix lp;
  if (basis.kind == BasisKind::Difference) {
    // L P+ : column i is the prefix sum of columns 0..i
    lp = Matrix(basis.m, basis.m - 1);
    for (std::size_t r = 0; r < basis.m; ++r) {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < basis.m; ++i) {
        acc += l(r, i);
        lp(r, i) = acc;
      }
    }
  } else {
    lp = l * basis.Pplus;
  }
  return basis.reduce(lp);
}

// ---------------------------------------------------------------------------
// Norms and spectral radius

double vector_norm(std::span<const double> x, NormKind kind) {
  double acc = 0.0;
  switch (kind) {
    case NormKind::Inf:
      for (double v : x) acc = std::max(acc, std::abs(v));
      return acc;
    case NormKind::One:
      for (double v : x) acc += std::abs(v);
      return acc;
    case NormKind::Two: {
      // scaled to avoid overflow/underflow on tiny deviations
      double scale = 0.0;
      for (double v : x) scale = std::max(scale, std::abs(v));
      if (scale == 0.0) return 0.0;
      for (double v : x) acc += (v / scale) * (v / scale);
      return scale * std::sqrt(acc);
    }
  }
  return acc;
}

double matrix_norm(const Matrix& m, NormKind kind) {
  switch (kind) {
    case NormKind::Inf: {
      double best = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) best = std::max(best, vector_norm(m.row(i), NormKind::One));
      return best;
    }
    case NormKind::One: {
      std::vector<double> col(m.cols(), 0.0);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) col[j] += std::abs(m(i, j));
      return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
    }
    case NormKind::Two: {
      const double s = m.max_abs();
      if (s == 0.0) return 0.0;
      Matrix scaled = m;
      scaled.scale(1.0 / s);
      return s * std::sqrt(spectral_radius(scaled.transposed() * scaled));
    }
  }
  return 0.0;
}

double spectral_radius(const Matrix& m) {
  require_square(m);
  const double n0 = matrix_norm(m, NormKind::Inf);
  if (n0 == 0.0) return 0.0;
  Matrix a = m;
  a.scale(1.0 / n0);
  double log_radius = std::log(n0);
  double weight = 1.0;
  Matrix sq(m.rows(), m.cols());
  for (int j = 1; j <= 64; ++j) {
    kernels::matmul(a, a, sq);
    const double n = matrix_norm(sq, NormKind::Inf);
    if (n == 0.0) return 0.0;
    weight *= 0.5;
    const double inc = weight * std::log(n);
    log_radius += inc;
    sq.scale(1.0 / n);
    std::swap(a, sq);
    if (j >= 8 && std::abs(inc) <= 1e-17 * std::max(1.0, std::abs(log_radius))) break;
  }
  return std::exp(log_radius);
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const Matrix& m) {
  j = nlohmann::json{{"rows", m.rows()},
                     {"cols", m.cols()},
                     {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

void from_json(const nlohmann::json& j, Matrix& m) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw Error(ErrorKind::InvalidConfig, "matrix JSON needs rows, cols and data");
  }
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  if (rows == 0 || cols == 0) throw Error(ErrorKind::InvalidConfig, "matrix must be nonempty");
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) {
    throw Error(ErrorKind::InvalidConfig, "matrix data length " + std::to_string(data.size()) +
                                              " != rows*cols " + std::to_string(rows * cols));
  }
  m = Matrix(rows, cols, std::move(data));
}

}  // namespace tvsync
