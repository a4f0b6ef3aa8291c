#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <json.hpp>

#include "tvsync/errors.hpp"

namespace tvsync {

enum class NormKind { Inf, One, Two };

NormKind parse_norm_kind(std::string_view name);
std::string_view to_string(NormKind kind) noexcept;

/// Dense row-major real matrix. Entries are finite: constructors that take
/// external data reject NaN/Inf.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  double max_abs() const noexcept;
  void scale(double factor) noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Largest absolute elementwise difference.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Square, nonnegative, unit row sums (1e-12). Read-only once built.
class StochasticMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Validates without modifying; `tol` widens the row-sum check for long
  /// products.
  static StochasticMatrix validated(Matrix m, double tol = kRowSumTolerance);

  const Matrix& matrix() const noexcept { return inner_; }
  operator const Matrix&() const noexcept { return inner_; }  // NOLINT(google-explicit-constructor)
  std::size_t dim() const noexcept { return inner_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return inner_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return inner_.row(i); }

  friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

 private:
  explicit StochasticMatrix(Matrix m) : inner_(std::move(m)) {}
  friend StochasticMatrix make_stochastic(const Matrix& raw);
  Matrix inner_;
};

/// Divides every row by its sum. Rows already summing to 1 within a few ulps
/// are left untouched, which makes the operation exactly idempotent.
StochasticMatrix make_stochastic(const Matrix& raw);

enum class BasisKind { Difference, Orthonormal };

BasisKind parse_basis_kind(std::string_view name);
std::string_view to_string(BasisKind kind) noexcept;

/// (m-1) x m matrix P with kernel span{e0} plus a right inverse P+.
struct ProjectionBasis {
  std::size_t m = 0;
  BasisKind kind = BasisKind::Difference;
  Matrix P;
  Matrix Pplus;

  /// P+ V for an (m-1) x k block V.
  Matrix lift(const Matrix& v) const;
  /// P X for an m x k block X.
  Matrix reduce(const Matrix& x) const;
};

ProjectionBasis projection_basis(std::size_t m, BasisKind kind);

inline constexpr double kRowSumConstancyTol = 1e-9;

/// Common row sum of L; throws NotRowSumConstant when rows deviate beyond
/// 1e-9 * max(1, |L|_inf).
double common_row_sum(const Matrix& l);

/// L-hat solving P L = L-hat P, computed as P L P+.
Matrix project(const Matrix& l, const ProjectionBasis& basis);

double matrix_norm(const Matrix& m, NormKind kind = NormKind::Inf);
double vector_norm(std::span<const double> x, NormKind kind = NormKind::Inf);

/// Spectral radius by normalized repeated squaring (power iteration on the
/// matrix powers M^(2^j)); handles complex dominant pairs.
double spectral_radius(const Matrix& m);

void to_json(nlohmann::json& j, const Matrix& m);
void from_json(const nlohmann::json& j, Matrix& m);

}  // namespace tvsync
