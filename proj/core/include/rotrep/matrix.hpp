#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rotrep {

using Vector = std::vector<double>;

/// Small dense row-major matrix. Sized for rotation work (n <= 16), not BLAS.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Builds a matrix whose j-th column is `columns[j]`.
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Vector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  Matrix transpose() const;
  double trace() const;
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);
Vector operator*(const Matrix& m, std::span<const double> v);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
/// ‖MᵀM − I‖_∞ (entrywise max).
double orthogonality_error(const Matrix& m);

/// Cofactor expansion for n <= 4, LU with partial pivoting above.
double determinant(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
Vector cross(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> v);

/// u / ‖u‖. Throws NearZeroInput when ‖u‖ <= `eps`.
Vector normalize(std::span<const double> u, double eps = 1e-12);

/// Formal determinant of [v_1 … v_{n-1} | e] expanded along the basis column.
/// Orthogonal to every input; completes an orthonormal set to a det +1 basis.
Vector generalized_cross(const std::vector<Vector>& vs);

/// Sign with sgn(0) := +1.
inline double sign_nonneg(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace rotrep
