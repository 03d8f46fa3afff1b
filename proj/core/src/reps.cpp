#include "rotrep/reps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rotrep/error.hpp"

namespace rotrep {

namespace {

constexpr double kGsEps = 1e-9;
constexpr double kPoleBand = 1e-9;
constexpr double kNearPiBand = 1e-6;
constexpr double kEulerLockBand = 1e-8;

void require_n(const RotationMatrix& m, std::size_t n, const char* what) {
  if (m.n() != n) {
    std::ostringstream msg;
    msg << what << " expects SO(" << n << "), got SO(" << m.n() << ")";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

void require_len(std::span<const double> r, std::size_t len, const char* what) {
  if (r.size() != len) {
    std::ostringstream msg;
    msg << what << " expects a vector of length " << len << ", got " << r.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!all_finite(r)) throw Error(ErrorKind::DegenerateInput, std::string(what) + ": non-finite input");
}

std::vector<Vector> unpack_columns(std::span<const double> r, std::size_t n) {
  std::vector<Vector> cols(n - 1, Vector(n));
  for (std::size_t c = 0; c + 1 < n; ++c)
    for (std::size_t i = 0; i < n; ++i) cols[c][i] = r[c * n + i];
  return cols;
}

std::vector<double> gamma(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> out;
  out.reserve(n * (n - 1));
  for (std::size_t c = 0; c + 1 < n; ++c)
    for (std::size_t i = 0; i < n; ++i) out.push_back(m(i, c));
  return out;
}

std::array<double, 3> skew_part(const Matrix& m) {
  return {m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
}

}  // namespace

std::size_t RepresentationKind::dimension() const {
  switch (tag) {
    case ReprTag::Euler:
    case ReprTag::Rodriguez:
      return 3;
    case ReprTag::Quaternion:
    case ReprTag::UnitQuaternion:
    case ReprTag::HemiQuaternion:
    case ReprTag::AxisAngle:
      return 4;
    case ReprTag::TwoD:
      return 2;
    case ReprTag::GramSchmidt:
      if (n < 2) throw Error(ErrorKind::InvalidKind, "Gram-Schmidt needs n >= 2");
      return n * n - n;
    case ReprTag::Projected:
      if (n < 3 || k < 1 || k > n - 2) {
        throw Error(ErrorKind::InvalidK, "projection count k must satisfy 1 <= k <= n-2 with n >= 3");
      }
      return n * n - n - k;
    case ReprTag::Orthogonal:
      if (n < 2) throw Error(ErrorKind::InvalidKind, "O(n) needs n >= 2");
      return n * n - n + 1;
    case ReprTag::Similarity:
      if (n < 2) throw Error(ErrorKind::InvalidKind, "Sim(n) needs n >= 2");
      return n * n;
    case ReprTag::RawMatrix:
      if (n < 2) throw Error(ErrorKind::InvalidKind, "raw matrix needs n >= 2");
      return n * n;
  }
  throw Error(ErrorKind::InvalidKind, "unknown representation tag");
}

std::string RepresentationKind::name() const {
  switch (tag) {
    case ReprTag::Euler: return "euler";
    case ReprTag::Quaternion: return "quat";
    case ReprTag::UnitQuaternion: return "uquat";
    case ReprTag::HemiQuaternion: return "hquat";
    case ReprTag::AxisAngle: return "axisangle";
    case ReprTag::Rodriguez: return "rodriguez";
    case ReprTag::TwoD: return "twod";
    case ReprTag::GramSchmidt: return n == 3 ? "gs6" : "gs_n" + std::to_string(n);
    case ReprTag::Projected:
      if (n == 3 && k == 1) return "p5";
      return "proj_n" + std::to_string(n) + "_k" + std::to_string(k);
    case ReprTag::Orthogonal: return "ortho_n" + std::to_string(n);
    case ReprTag::Similarity: return "sim_n" + std::to_string(n);
    case ReprTag::RawMatrix: return n == 3 ? "raw9" : "raw_n" + std::to_string(n);
  }
  return "unknown";
}

RepresentationKind parse_kind(std::string_view name, std::size_t n) {
  const std::string s(name);
  auto fail = [&]() -> RepresentationKind {
    throw Error(ErrorKind::InvalidKind, "unknown representation kind '" + s + "'");
  };
  auto parse_uint = [&](std::string_view digits) -> std::size_t {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      fail();
    }
    return static_cast<std::size_t>(std::stoul(std::string(digits)));
  };

  RepresentationKind kind;
  if (s == "euler") kind = RepresentationKind::euler();
  else if (s == "quat") kind = RepresentationKind::quaternion();
  else if (s == "uquat") kind = RepresentationKind::unit_quaternion();
  else if (s == "hquat") kind = RepresentationKind::hemi_quaternion();
  else if (s == "axisangle") kind = RepresentationKind::axis_angle();
  else if (s == "rodriguez") kind = RepresentationKind::rodriguez();
  else if (s == "twod") kind = RepresentationKind::two_d();
  else if (s == "gs6") kind = RepresentationKind::gram_schmidt(3);
  else if (s == "p5") kind = RepresentationKind::projected(3, 1);
  else if (s == "raw9") kind = RepresentationKind::raw_matrix(3);
  else if (s == "gs") kind = RepresentationKind::gram_schmidt(n);
  else if (s == "proj") kind = RepresentationKind::projected(n, 1);
  else if (s == "ortho") kind = RepresentationKind::orthogonal(n);
  else if (s == "sim") kind = RepresentationKind::similarity(n);
  else if (s == "raw") kind = RepresentationKind::raw_matrix(n);
  else if (s.starts_with("mp")) kind = RepresentationKind::projected(n, parse_uint(std::string_view(s).substr(2)));
  else if (s.starts_with("gs_n")) kind = RepresentationKind::gram_schmidt(parse_uint(std::string_view(s).substr(4)));
  else if (s.starts_with("ortho_n")) kind = RepresentationKind::orthogonal(parse_uint(std::string_view(s).substr(7)));
  else if (s.starts_with("sim_n")) kind = RepresentationKind::similarity(parse_uint(std::string_view(s).substr(5)));
  else if (s.starts_with("raw_n")) kind = RepresentationKind::raw_matrix(parse_uint(std::string_view(s).substr(5)));
  else if (s.starts_with("proj_n")) {
    const auto rest = std::string_view(s).substr(6);
    const auto sep = rest.find("_k");
    if (sep == std::string_view::npos) fail();
    kind = RepresentationKind::projected(parse_uint(rest.substr(0, sep)), parse_uint(rest.substr(sep + 2)));
  } else {
    fail();
  }
  (void)kind.dimension();  // rejects invalid n / k combinations
  return kind;
}

// ---- 2D ----------------------------------------------------------------------------

ReprVector twod_g(const RotationMatrix& m) {
  require_n(m, 2, "twod_g");
  return {RepresentationKind::two_d(), {m(0, 0), m(1, 0)}};
}

RotationMatrix twod_f(std::span<const double> r) {
  require_len(r, 2, "twod_f");
  const Vector cs = normalize(r);
  return RotationMatrix::trusted(Matrix{{cs[0], -cs[1]}, {cs[1], cs[0]}});
}

// ---- Quaternions --------------------------------------------------------------------

ReprVector quat_g(const RotationMatrix& m) {
  require_n(m, 3, "quat_g");
  const Matrix& a = m.matrix();
  const double t = a.trace() + 1.0;
  if (t > 0.0) {
    const auto s = skew_part(a);
    return {RepresentationKind::quaternion(), {s[0], s[1], s[2], t}};
  }
  // t == 0: 180° rotations (t < 0 only arises from rounding at the same set).
  auto coefficient = [&](std::size_t i) {
    const double s = a(i, 0) + a(0, i);
    if (s > 0.0) return 1.0;
    if (s < 0.0) return -1.0;
    return std::pow(sign_nonneg(a(2, 1)), static_cast<double>(i + 1));
  };
  return {RepresentationKind::quaternion(),
          {std::sqrt(std::max(0.0, a(0, 0) + 1.0)), coefficient(1) * std::sqrt(std::max(0.0, a(1, 1) + 1.0)),
           coefficient(2) * std::sqrt(std::max(0.0, a(2, 2) + 1.0)), 0.0}};
}

RotationMatrix quat_f(std::span<const double> r) {
  require_len(r, 4, "quat_f");
  const Vector q = normalize(r);
  return RotationMatrix::trusted(unit_quaternion_matrix(q[0], q[1], q[2], q[3]));
}

ReprVector unit_quat_g(const RotationMatrix& m) {
  require_n(m, 3, "unit_quat_g");
  const Matrix& a = m.matrix();
  auto half_sqrt = [](double x) { return 0.5 * std::sqrt(std::max(0.0, x)); };
  auto copysign_nonneg = [](double mag, double s) { return sign_nonneg(s) * std::abs(mag); };
  const auto s = skew_part(a);
  Vector q{
      copysign_nonneg(half_sqrt(1 + a(0, 0) - a(1, 1) - a(2, 2)), s[0]),
      copysign_nonneg(half_sqrt(1 - a(0, 0) + a(1, 1) - a(2, 2)), s[1]),
      copysign_nonneg(half_sqrt(1 - a(0, 0) - a(1, 1) + a(2, 2)), s[2]),
      half_sqrt(1 + a(0, 0) + a(1, 1) + a(2, 2)),
  };
  // The four square roots are individually accurate only to ~1e-8; rescale so
  // the result is unit length.
  const double len = norm(q);
  for (double& x : q) x /= len;
  return {RepresentationKind::unit_quaternion(), std::move(q)};
}

ReprVector hemi_quat_g(const RotationMatrix& m) {
  ReprVector out = unit_quat_g(m);
  out.kind = RepresentationKind::hemi_quaternion();
  auto& q = out.data;
  bool flip = q[3] < 0.0;
  if (q[3] == 0.0) {
    const auto first = std::find_if(q.begin(), q.end(), [](double x) { return x != 0.0; });
    flip = first != q.end() && *first < 0.0;
  }
  if (flip) {
    for (double& x : q) x = -x;
  }
  return out;
}

// ---- Axis-angle and Rodriguez ------------------------------------------------------

ReprVector axis_angle_g(const RotationMatrix& m) {
  require_n(m, 3, "axis_angle_g");
  const Matrix& a = m.matrix();
  const auto skew = skew_part(a);
  const double c = std::clamp((a.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double s = 0.5 * norm(skew);
  const double theta = std::atan2(s, c);

  std::array<double, 3> axis{1.0, 0.0, 0.0};
  if (theta < 1e-12) {
    // axis := e1
  } else if (std::numbers::pi - theta < kNearPiBand) {
    // The skew part vanishes at π; (M + Mᵀ)/2 − cos θ·I = (1 − cos θ)·aaᵀ.
    const double one_minus_c = 1.0 - c;
    Matrix outer(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        outer(i, j) = (0.5 * (a(i, j) + a(j, i)) - (i == j ? c : 0.0)) / one_minus_c;
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (outer(i, i) > outer(k, k)) k = i;
    const double ak = std::sqrt(std::max(outer(k, k), 0.0));
    for (std::size_t i = 0; i < 3; ++i) axis[i] = (i == k) ? ak : outer(i, k) / ak;
    const Vector unit = normalize(axis);
    std::copy(unit.begin(), unit.end(), axis.begin());
    if (sign_nonneg(dot(axis, skew)) < 0.0) {
      for (double& x : axis) x = -x;
    }
  } else {
    for (std::size_t i = 0; i < 3; ++i) axis[i] = skew[i] / (2.0 * s);
  }
  return {RepresentationKind::axis_angle(), {axis[0], axis[1], axis[2], theta}};
}

RotationMatrix axis_angle_f(std::span<const double> r) {
  require_len(r, 4, "axis_angle_f");
  const double theta = r[3];
  const auto axis = r.subspan(0, 3);
  if (!(norm(axis) > 1e-12)) {
    if (std::abs(theta) <= 1e-12) return RotationMatrix::identity(3);
    throw Error(ErrorKind::NearZeroAxis, "axis norm is ~0 for a nonzero angle");
  }
  return axis_angle_to_matrix(axis, theta);
}

ReprVector rodriguez_g(const RotationMatrix& m) {
  const ReprVector aa = axis_angle_g(m);
  const double theta = aa.data[3];
  return {RepresentationKind::rodriguez(), {aa.data[0] * theta, aa.data[1] * theta, aa.data[2] * theta}};
}

RotationMatrix rodriguez_f(std::span<const double> r) {
  require_len(r, 3, "rodriguez_f");
  const double theta = norm(r);
  if (theta == 0.0) return RotationMatrix::identity(3);
  const std::array<double, 3> axis{r[0] / theta, r[1] / theta, r[2] / theta};
  return axis_angle_to_matrix(axis, theta);
}

// ---- Euler --------------------------------------------------------------------------

ReprVector euler_g(const RotationMatrix& m) {
  require_n(m, 3, "euler_g");
  const Matrix& a = m.matrix();
  const double cos_pitch = std::hypot(a(0, 0), a(1, 0));
  const double pitch = std::atan2(-a(2, 0), cos_pitch);
  double yaw = 0.0, roll = 0.0;
  if (cos_pitch < kEulerLockBand) {
    // Gimbal lock: yaw and roll act about the same axis; fold everything into yaw.
    yaw = std::atan2(-a(0, 1), a(1, 1));
  } else {
    yaw = std::atan2(a(1, 0), a(0, 0));
    roll = std::atan2(a(2, 1), a(2, 2));
  }
  return {RepresentationKind::euler(), {yaw, pitch, roll}};
}

RotationMatrix euler_f(std::span<const double> r) {
  require_len(r, 3, "euler_f");
  const double ca = std::cos(r[0]), sa = std::sin(r[0]);
  const double cb = std::cos(r[1]), sb = std::sin(r[1]);
  const double cg = std::cos(r[2]), sg = std::sin(r[2]);
  return RotationMatrix::trusted(Matrix{
      {ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg},
      {sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg},
      {-sb, cb * sg, cb * cg},
  });
}

// ---- Gram-Schmidt -------------------------------------------------------------------

ReprVector gram_schmidt_g(const RotationMatrix& m) {
  return {RepresentationKind::gram_schmidt(m.n()), gamma(m.matrix())};
}

RotationMatrix gram_schmidt_f(std::span<const double> r, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "gram_schmidt_f needs n >= 2");
  require_len(r, n * (n - 1), "gram_schmidt_f");
  return RotationMatrix::trusted(gram_schmidt_complete(unpack_columns(r, n), kGsEps));
}

// ---- Stereographic projection ---------------------------------------------------------

Vector normalized_projection(std::span<const double> u) {
  if (u.size() < 2) throw Error(ErrorKind::DimensionMismatch, "normalized projection needs m >= 2");
  const Vector v = normalize(u);
  if (v[0] >= 1.0 - kPoleBand) throw Error(ErrorKind::ProjectionPole, "input lies at the projection point");
  Vector out(v.size() - 1);
  for (std::size_t i = 1; i < v.size(); ++i) out[i - 1] = v[i] / (1.0 - v[0]);
  return out;
}

Vector stereo_unprojection(std::span<const double> u) {
  const double len = norm(u);
  if (!(len > 1e-12)) throw Error(ErrorKind::NearZeroInput, "stereographic un-projection of ~0 vector");
  Vector out;
  out.reserve(u.size() + 1);
  out.push_back(0.5 * (len * len - 1.0) / len);
  for (double x : u) out.push_back(x / len);
  return out;
}

// ---- Single projection ----------------------------------------------------------------

ReprVector projected_g(const RotationMatrix& m) {
  const std::size_t n = m.n();
  if (n < 3) throw Error(ErrorKind::DimensionMismatch, "projected representation needs n >= 3");
  const std::vector<double> g = gamma(m.matrix());
  const std::size_t keep = n * n - 2 * n - 1;
  std::vector<double> out(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(keep));
  const Vector p = normalized_projection(std::span<const double>(g).subspan(keep));
  out.insert(out.end(), p.begin(), p.end());
  return {RepresentationKind::projected(n, 1), std::move(out)};
}

RotationMatrix projected_f(std::span<const double> r, std::size_t n) {
  if (n < 3) throw Error(ErrorKind::DimensionMismatch, "projected representation needs n >= 3");
  require_len(r, n * n - n - 1, "projected_f");
  const std::size_t keep = n * n - 2 * n - 1;
  std::vector<double> g(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(keep));
  const Vector q = stereo_unprojection(r.subspan(keep));
  g.insert(g.end(), q.begin(), q.end());
  return gram_schmidt_f(g, n);
}

// ---- Multiple projections ---------------------------------------------------------------

ReprVector multi_projection_g(const RotationMatrix& m, std::size_t k) {
  const std::size_t n = m.n();
  const RepresentationKind kind = RepresentationKind::projected(n, k);
  (void)kind.dimension();
  const Matrix& a = m.matrix();

  std::vector<double> out;
  out.reserve(kind.dimension());
  for (std::size_t row = 0; row < n - k; ++row) out.push_back(a(row, 0));
  for (std::size_t i = 1; i <= k; ++i) {
    Vector group;
    group.reserve(n + 1);
    group.push_back(a(n - i, 0));  // γ_{n+1−i}
    for (std::size_t row = 0; row < n; ++row) group.push_back(a(row, i));
    const Vector p = normalized_projection(group);
    out.insert(out.end(), p.begin(), p.end());
  }
  for (std::size_t c = k + 1; c + 1 < n; ++c)
    for (std::size_t row = 0; row < n; ++row) out.push_back(a(row, c));
  return {kind, std::move(out)};
}

RotationMatrix multi_projection_f(std::span<const double> r, std::size_t n, std::size_t k) {
  const RepresentationKind kind = RepresentationKind::projected(n, k);
  require_len(r, kind.dimension(), "multi_projection_f");

  std::vector<Vector> cols(n - 1, Vector(n, 0.0));
  std::size_t pos = 0;
  for (std::size_t row = 0; row < n - k; ++row) cols[0][row] = r[pos++];
  for (std::size_t i = 1; i <= k; ++i) {
    const Vector group = stereo_unprojection(r.subspan(pos, n));
    pos += n;
    cols[0][n - i] = group[0];
    for (std::size_t row = 0; row < n; ++row) cols[i][row] = group[row + 1];
  }
  for (std::size_t c = k + 1; c + 1 < n; ++c)
    for (std::size_t row = 0; row < n; ++row) cols[c][row] = r[pos++];
  return RotationMatrix::trusted(gram_schmidt_complete(cols, kGsEps));
}

// ---- O(n) ------------------------------------------------------------------------------

ReprVector orthogonal_g(const Matrix& m) {
  if (!m.is_square() || m.rows() < 2) throw Error(ErrorKind::DimensionMismatch, "orthogonal_g needs n x n, n >= 2");
  if (!m.all_finite() || orthogonality_error(m) > kRotationTolerance) {
    throw Error(ErrorKind::NotRotation, "orthogonal_g input is not orthogonal");
  }
  std::vector<double> out = gamma(m);
  out.push_back(sign_nonneg(determinant(m)));
  return {RepresentationKind::orthogonal(m.rows()), std::move(out)};
}

Matrix orthogonal_f(std::span<const double> r, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "orthogonal_f needs n >= 2");
  require_len(r, n * n - n + 1, "orthogonal_f");
  Matrix out = gram_schmidt_f(r.subspan(0, n * n - n), n).matrix();
  if (sign_nonneg(r.back()) < 0.0) {
    for (std::size_t row = 0; row < n; ++row) out(row, n - 1) = -out(row, n - 1);
  }
  return out;
}

// ---- Sim(n) -----------------------------------------------------------------------------

ReprVector similarity_g(const SimilarityTransform& t) {
  const Matrix& rot = t.rotation;
  const std::size_t n = rot.rows();
  if (!rot.is_square() || n < 2 || t.translation.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "similarity_g: rotation must be n x n and translation length n");
  }
  if (!(t.scale > 1e-9)) throw Error(ErrorKind::NearZeroScale, "similarity scale must be > 1e-9");
  if (!is_rotation(rot)) {
    throw Error(ErrorKind::NotRotation, "similarity_g: rotation part must have det +1 to be representable");
  }
  std::vector<double> out = gamma(t.scale * rot);
  out.insert(out.end(), t.translation.begin(), t.translation.end());
  return {RepresentationKind::similarity(n), std::move(out)};
}

SimilarityTransform similarity_f(std::span<const double> r, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "similarity_f needs n >= 2");
  require_len(r, n * n, "similarity_f");
  const auto gs_part = r.subspan(0, n * n - n);
  const double scale = norm(gs_part.subspan(0, n));
  if (!(scale > 1e-9)) throw Error(ErrorKind::NearZeroScale, "recovered similarity scale is ~0");
  SimilarityTransform t;
  t.scale = scale;
  t.rotation = gram_schmidt_f(gs_part, n).matrix();
  t.translation.assign(r.begin() + static_cast<std::ptrdiff_t>(n * n - n), r.end());
  return t;
}

// ---- Composition --------------------------------------------------------------------------

ReprVector repr_compose(std::span<const double> r1, std::span<const double> r2, std::size_t n) {
  require_len(r2, n * (n - 1), "repr_compose");
  const Matrix left = gram_schmidt_f(r1, n).matrix();
  std::vector<double> out(n * (n - 1), 0.0);
  for (std::size_t c = 0; c + 1 < n; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += left(i, j) * r2[c * n + j];
      out[c * n + i] = s;
    }
  return {RepresentationKind::gram_schmidt(n), std::move(out)};
}

// ---- Dispatch -------------------------------------------------------------------------------

ReprVector encode(const RepresentationKind& kind, const RotationMatrix& m) {
  switch (kind.tag) {
    case ReprTag::Euler: return euler_g(m);
    case ReprTag::Quaternion: return quat_g(m);
    case ReprTag::UnitQuaternion: return unit_quat_g(m);
    case ReprTag::HemiQuaternion: return hemi_quat_g(m);
    case ReprTag::AxisAngle: return axis_angle_g(m);
    case ReprTag::Rodriguez: return rodriguez_g(m);
    case ReprTag::TwoD: return twod_g(m);
    case ReprTag::GramSchmidt: require_n(m, kind.n, "encode"); return gram_schmidt_g(m);
    case ReprTag::Projected:
      require_n(m, kind.n, "encode");
      return kind.k == 1 ? projected_g(m) : multi_projection_g(m, kind.k);
    case ReprTag::RawMatrix:
      require_n(m, kind.n, "encode");
      return {kind, m.flat()};
    case ReprTag::Orthogonal: {
      require_n(m, kind.n, "encode");
      return orthogonal_g(m.matrix());
    }
    case ReprTag::Similarity:
      break;
  }
  throw Error(ErrorKind::InvalidKind, kind.name() + " has no SO(n) encoder; use similarity_g");
}

RotationMatrix decode(const RepresentationKind& kind, std::span<const double> r) {
  switch (kind.tag) {
    case ReprTag::Euler: return euler_f(r);
    case ReprTag::Quaternion:
    case ReprTag::UnitQuaternion:
    case ReprTag::HemiQuaternion: return quat_f(r);
    case ReprTag::AxisAngle: return axis_angle_f(r);
    case ReprTag::Rodriguez: return rodriguez_f(r);
    case ReprTag::TwoD: return twod_f(r);
    case ReprTag::GramSchmidt: return gram_schmidt_f(r, kind.n);
    case ReprTag::Projected: return kind.k == 1 ? projected_f(r, kind.n) : multi_projection_f(r, kind.n, kind.k);
    case ReprTag::RawMatrix: {
      require_len(r, kind.n * kind.n, "decode raw");
      const Matrix raw(kind.n, kind.n, std::vector<double>(r.begin(), r.end()));
      std::vector<Vector> cols;
      for (std::size_t c = 0; c + 1 < kind.n; ++c) cols.push_back(raw.column(c));
      return RotationMatrix::trusted(gram_schmidt_complete(cols, kGsEps));
    }
    case ReprTag::Orthogonal:
    case ReprTag::Similarity:
      break;
  }
  throw Error(ErrorKind::InvalidKind, kind.name() + " does not decode to SO(n); use its dedicated f");
}

RoundTripSpec roundtrip_spec(const RepresentationKind& kind) {
  switch (kind.tag) {
    case ReprTag::GramSchmidt:
    case ReprTag::Orthogonal:
    case ReprTag::Similarity:
    case ReprTag::RawMatrix:
      return {RoundTripMetric::Frobenius, 1e-9};
    case ReprTag::TwoD:
      return {RoundTripMetric::Frobenius, 1e-12};
    case ReprTag::Projected:
      return {RoundTripMetric::Frobenius, 1e-7};
    case ReprTag::Euler:
    case ReprTag::Quaternion:
    case ReprTag::UnitQuaternion:
    case ReprTag::HemiQuaternion:
    case ReprTag::AxisAngle:
    case ReprTag::Rodriguez:
      return {RoundTripMetric::Geodesic, 1e-6};
  }
  throw Error(ErrorKind::InvalidKind, "unknown representation tag");
}

double roundtrip_error(const RepresentationKind& kind, const RotationMatrix& m) {
  const RoundTripSpec spec = roundtrip_spec(kind);
  if (kind.tag == ReprTag::Similarity) {
    throw Error(ErrorKind::InvalidKind, "use similarity_g/similarity_f for Sim(n) round trips");
  }
  if (kind.tag == ReprTag::Orthogonal) {
    const ReprVector r = orthogonal_g(m.matrix());
    return frobenius_norm(orthogonal_f(r.data, kind.n) - m.matrix());
  }
  const RotationMatrix back = decode(kind, encode(kind, m).data);
  if (spec.metric == RoundTripMetric::Geodesic) return geodesic_distance(back, m);
  return frobenius_norm(back.matrix() - m.matrix());
}

}  // namespace rotrep
