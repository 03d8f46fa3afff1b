#include "rotrep/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotrep/error.hpp"

namespace rotrep {

bool is_rotation(const Matrix& m, double tol) {
  if (!m.is_square() || m.rows() == 0 || !m.all_finite()) return false;
  return orthogonality_error(m) <= tol && std::abs(determinant(m) - 1.0) <= tol;
}

RotationMatrix::RotationMatrix(Matrix m) : m_(std::move(m)) {
  if (!is_rotation(m_)) {
    std::ostringstream msg;
    msg << m_.rows() << "x" << m_.cols() << " matrix is not in SO(n)";
    if (m_.is_square() && m_.rows() > 0) {
      msg << " (orthogonality error " << orthogonality_error(m_) << ", det " << determinant(m_) << ")";
    }
    throw Error(ErrorKind::NotRotation, msg.str());
  }
}

RotationMatrix RotationMatrix::trusted(Matrix m) { return RotationMatrix(std::move(m), TrustedTag{}); }

RotationMatrix rot_x(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return RotationMatrix::trusted(Matrix{{1, 0, 0}, {0, c, -s}, {0, s, c}});
}

RotationMatrix rot_y(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return RotationMatrix::trusted(Matrix{{c, 0, s}, {0, 1, 0}, {-s, 0, c}});
}

RotationMatrix rot_z(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return RotationMatrix::trusted(Matrix{{c, -s, 0}, {s, c, 0}, {0, 0, 1}});
}

RotationMatrix axis_angle_to_matrix(std::span<const double> axis, double angle) {
  if (axis.size() != 3) throw Error(ErrorKind::DimensionMismatch, "axis must be a 3-vector");
  if (angle == 0.0) return RotationMatrix::identity(3);
  const double len = norm(axis);
  if (!(len > 1e-12)) throw Error(ErrorKind::NearZeroAxis, "axis norm is ~0 for a nonzero angle");
  const double x = axis[0] / len, y = axis[1] / len, z = axis[2] / len;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return RotationMatrix::trusted(Matrix{
      {c + t * x * x, t * x * y - s * z, t * x * z + s * y},
      {t * x * y + s * z, c + t * y * y, t * y * z - s * x},
      {t * x * z - s * y, t * y * z + s * x, c + t * z * z},
  });
}

Matrix unit_quaternion_matrix(double x, double y, double z, double w) {
  return Matrix{
      {1 - 2 * y * y - 2 * z * z, 2 * x * y - 2 * z * w, 2 * x * z + 2 * y * w},
      {2 * x * y + 2 * z * w, 1 - 2 * x * x - 2 * z * z, 2 * y * z - 2 * x * w},
      {2 * x * z - 2 * y * w, 2 * y * z + 2 * x * w, 1 - 2 * x * x - 2 * y * y},
  };
}

double geodesic_distance(const RotationMatrix& a, const RotationMatrix& b) {
  if (a.n() != 3 || b.n() != 3) throw Error(ErrorKind::DimensionMismatch, "geodesic distance needs 3x3");
  // Tr(A·Bᵀ) = Σ A_ij B_ij
  const double tr = dot(a.matrix().data(), b.matrix().data());
  return std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
}

Matrix gram_schmidt_complete(const std::vector<Vector>& a, double eps) {
  const std::size_t n = a.size() + 1;
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "need at least one column");
  for (const auto& col : a) {
    if (col.size() != n) throw Error(ErrorKind::DimensionMismatch, "expected n-1 columns of length n");
  }
  std::vector<Vector> b;
  b.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Vector residual = a[i];
    for (const auto& bj : b) {
      const double proj = dot(bj, a[i]);
      for (std::size_t r = 0; r < n; ++r) residual[r] -= proj * bj[r];
    }
    const double len = norm(residual);
    if (!(len > eps)) {
      std::ostringstream msg;
      msg << "column " << i + 1 << " residual norm " << len << " is inside the degenerate band";
      throw Error(ErrorKind::DegenerateInput, msg.str());
    }
    for (double& x : residual) x /= len;
    b.push_back(std::move(residual));
  }
  b.push_back(generalized_cross(b));
  return Matrix::from_columns(b);
}

RotationMatrix orthogonalize_3x3(const Matrix& raw) {
  if (raw.rows() != 3 || raw.cols() != 3) throw Error(ErrorKind::DimensionMismatch, "expected 3x3");
  return RotationMatrix::trusted(gram_schmidt_complete({raw.column(0), raw.column(1)}));
}

}  // namespace rotrep
