#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rotrep/matrix.hpp"
#include "rotrep/rotation.hpp"

namespace rotrep {

enum class ReprTag {
  Euler,
  Quaternion,
  UnitQuaternion,
  HemiQuaternion,
  AxisAngle,
  Rodriguez,
  GramSchmidt,
  Projected,
  Orthogonal,
  Similarity,
  TwoD,
  RawMatrix,
};

/// Selects one (f, g) pair. `n` is the group dimension; `k` the number of
/// normalized projections for `Projected`.
struct RepresentationKind {
  ReprTag tag = ReprTag::GramSchmidt;
  std::size_t n = 3;
  std::size_t k = 0;

  static RepresentationKind euler() { return {ReprTag::Euler, 3, 0}; }
  static RepresentationKind quaternion() { return {ReprTag::Quaternion, 3, 0}; }
  static RepresentationKind unit_quaternion() { return {ReprTag::UnitQuaternion, 3, 0}; }
  static RepresentationKind hemi_quaternion() { return {ReprTag::HemiQuaternion, 3, 0}; }
  static RepresentationKind axis_angle() { return {ReprTag::AxisAngle, 3, 0}; }
  static RepresentationKind rodriguez() { return {ReprTag::Rodriguez, 3, 0}; }
  static RepresentationKind gram_schmidt(std::size_t n) { return {ReprTag::GramSchmidt, n, 0}; }
  /// k = 1 is the single-projection map on the trailing n+1 entries; k >= 2
  /// is the multi-projection layout.
  static RepresentationKind projected(std::size_t n, std::size_t k = 1) { return {ReprTag::Projected, n, k}; }
  static RepresentationKind orthogonal(std::size_t n) { return {ReprTag::Orthogonal, n, 0}; }
  static RepresentationKind similarity(std::size_t n) { return {ReprTag::Similarity, n, 0}; }
  static RepresentationKind two_d() { return {ReprTag::TwoD, 2, 0}; }
  /// Row-major flatten of the whole matrix; decoded by Gram-Schmidt on the
  /// first n−1 columns (the direct-regression baseline).
  static RepresentationKind raw_matrix(std::size_t n) { return {ReprTag::RawMatrix, n, 0}; }

  /// Length D of the representation vector. Throws InvalidK / InvalidKind for
  /// parameter combinations that do not exist.
  std::size_t dimension() const;
  /// Short stable name, e.g. "gs6", "p5", "quat", "gs_n4", "proj_n5_k3".
  std::string name() const;
  /// True for kinds whose decoder lands in SO(n) (everything but O(n), Sim(n)).
  bool is_rotation_kind() const { return tag != ReprTag::Orthogonal && tag != ReprTag::Similarity; }

  friend bool operator==(const RepresentationKind&, const RepresentationKind&) = default;
};

/// Accepts canonical names plus the short aliases gs, proj, mp<k>, which take
/// their group dimension from `n`. Throws InvalidKind.
RepresentationKind parse_kind(std::string_view name, std::size_t n = 3);

struct ReprVector {
  RepresentationKind kind;
  std::vector<double> data;
};

struct SimilarityTransform {
  double scale = 1.0;
  Matrix rotation;
  Vector translation;
};

// ---- 2D: first column of an SO(2) matrix -------------------------------------
ReprVector twod_g(const RotationMatrix& m);
RotationMatrix twod_f(std::span<const double> r);

// ---- Quaternion with the trace-based encoder (not unit length) ---------------
// g_q: t = Tr(M) + 1. For t > 0 the result is (M32−M23, M13−M31, M21−M12, t);
// otherwise (√(M11+1), c2·√(M22+1), c3·√(M33+1), 0) with c_i from the signs of
// M_i1 + M_1i, falling back to sgn(M32)^i, sgn(0) := +1.
ReprVector quat_g(const RotationMatrix& m);
RotationMatrix quat_f(std::span<const double> r);

/// Unit quaternion (x, y, z, w) via copysign on the skew part; w >= 0.
ReprVector unit_quat_g(const RotationMatrix& m);
/// unit_quat_g with w = 0 ties broken by making the first nonzero entry positive.
ReprVector hemi_quat_g(const RotationMatrix& m);

// ---- Axis-angle (x, y, z, θ) and Rodriguez vector θ·ω ------------------------
ReprVector axis_angle_g(const RotationMatrix& m);
RotationMatrix axis_angle_f(std::span<const double> r);
ReprVector rodriguez_g(const RotationMatrix& m);
RotationMatrix rodriguez_f(std::span<const double> r);

// ---- Euler angles, intrinsic Z-Y-X: M = Rz(yaw)·Ry(pitch)·Rx(roll) ------------
ReprVector euler_g(const RotationMatrix& m);
RotationMatrix euler_f(std::span<const double> r);

// ---- Gram-Schmidt, n² − n -----------------------------------------------------
/// First n−1 columns, concatenated column by column.
ReprVector gram_schmidt_g(const RotationMatrix& m);
/// `r` must have length n(n−1). Throws DegenerateInput when the unpacked
/// columns do not span n−1 dimensions (residual norm <= 1e-9).
RotationMatrix gram_schmidt_f(std::span<const double> r, std::size_t n);

// ---- Stereographic pieces -----------------------------------------------------
/// v = u/‖u‖, returns (v2, …, vm) / (1 − v1).
Vector normalized_projection(std::span<const double> u);
/// (½(‖u‖² − 1), u1, …, u_{m−1}) / ‖u‖.
Vector stereo_unprojection(std::span<const double> u);

// ---- One projection on the trailing n+1 entries: n² − n − 1 -------------------
ReprVector projected_g(const RotationMatrix& m);
RotationMatrix projected_f(std::span<const double> r, std::size_t n);

// ---- k projections, 1 <= k <= n−2: n² − n − k ----------------------------------
// Layout: column 1 rows 1…n−k, then for i = 1…k the projection of
// (γ_{n+1−i}, column i+1), then the remaining columns k+2…n−1 unchanged.
ReprVector multi_projection_g(const RotationMatrix& m, std::size_t k);
RotationMatrix multi_projection_f(std::span<const double> r, std::size_t n, std::size_t k);

// ---- O(n): Gram-Schmidt plus a determinant indicator ----------------------------
ReprVector orthogonal_g(const Matrix& m);
Matrix orthogonal_f(std::span<const double> r, std::size_t n);

// ---- Sim(n): γ(αR) followed by the translation ---------------------------------
// Covers proper similarities (det R = +1); f recovers α as the norm of the
// first stored column.
ReprVector similarity_g(const SimilarityTransform& t);
SimilarityTransform similarity_f(std::span<const double> r, std::size_t n);

/// Product of two Gram-Schmidt representations: f(r1) times the unpacked
/// columns of r2, which equals g(f(r1)·f(r2)) without decoding r2.
ReprVector repr_compose(std::span<const double> r1, std::span<const double> r2, std::size_t n);

// ---- Generic dispatch over SO(n) kinds -----------------------------------------
ReprVector encode(const RepresentationKind& kind, const RotationMatrix& m);
RotationMatrix decode(const RepresentationKind& kind, std::span<const double> r);

enum class RoundTripMetric { Frobenius, Geodesic };
struct RoundTripSpec {
  RoundTripMetric metric;
  double tolerance;
};
/// Error metric and tolerance used to accept f(g(M)) = M for `kind`.
RoundTripSpec roundtrip_spec(const RepresentationKind& kind);
/// ‖f(g(M)) − M‖_F or geodesic distance, per `roundtrip_spec`.
double roundtrip_error(const RepresentationKind& kind, const RotationMatrix& m);

}  // namespace rotrep
