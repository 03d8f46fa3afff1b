#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rotrep/matrix.hpp"

namespace rotrep {

inline constexpr double kRotationTolerance = 1e-9;

/// Element of SO(n): ‖MᵀM − I‖_∞ <= 1e-9 and det(M) = 1 ± 1e-9.
class RotationMatrix {
 public:
  /// Identity of SO(3).
  RotationMatrix() : m_(Matrix::identity(3)) {}
  /// Validates the SO(n) invariants; throws NotRotation otherwise.
  explicit RotationMatrix(Matrix m);

  static RotationMatrix identity(std::size_t n) { return trusted(Matrix::identity(n)); }
  /// For constructive outputs (closed-form maps, orthonormalization) that are
  /// in SO(n) by construction; skips the validation pass.
  static RotationMatrix trusted(Matrix m);

  std::size_t n() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  RotationMatrix transpose() const { return trusted(m_.transpose()); }
  /// Row-major entries.
  std::vector<double> flat() const { return {m_.data().begin(), m_.data().end()}; }

  friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
    return trusted(a.m_ * b.m_);
  }

 private:
  struct TrustedTag {};
  RotationMatrix(Matrix m, TrustedTag) : m_(std::move(m)) {}

  Matrix m_;
};

/// True when `m` is square and meets the SO(n) tolerances.
bool is_rotation(const Matrix& m, double tol = kRotationTolerance);

struct AxisAngle {
  std::array<double, 3> axis{1.0, 0.0, 0.0};
  double angle = 0.0;
};

RotationMatrix rot_x(double theta);
RotationMatrix rot_y(double theta);
RotationMatrix rot_z(double theta);

/// Rodrigues formula. The axis is normalized; throws NearZeroAxis when it
/// vanishes and the angle is nonzero.
RotationMatrix axis_angle_to_matrix(std::span<const double> axis, double angle);

/// Rotation matrix of the unit quaternion (x, y, z, w). No normalization.
Matrix unit_quaternion_matrix(double x, double y, double z, double w);

/// Minimal angle between two 3×3 rotations, acos of the clamped
/// (Tr(M·M2ᵀ) − 1)/2. Throws DimensionMismatch for n != 3.
double geodesic_distance(const RotationMatrix& a, const RotationMatrix& b);

/// Columns b_1 … b_n from the first n−1 columns `a` via Gram-Schmidt plus the
/// generalized cross product. Throws DegenerateInput when any residual norm is
/// <= `eps`.
Matrix gram_schmidt_complete(const std::vector<Vector>& a, double eps = 1e-9);

/// Projects a raw 3×3 prediction to SO(3) using its first two columns only.
RotationMatrix orthogonalize_3x3(const Matrix& raw);

}  // namespace rotrep
