#include "rotrep/sampling.hpp"

#include <cmath>

#include "rotrep/error.hpp"

namespace rotrep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Householder QR of a square matrix. Returns Q; `r_diag` receives diag(R).
Matrix householder_q(Matrix a, Vector& r_diag) {
  const std::size_t n = a.rows();
  Matrix q = Matrix::identity(n);
  r_diag.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Vector v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    const double alpha = -sign_nonneg(v[0]) * norm(v);
    v[0] -= alpha;
    const double vnorm2 = dot(v, v);
    if (vnorm2 == 0.0) continue;
    // A <- H A, Q <- Q H with H = I - 2 v vᵀ / (vᵀv)
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i - k] * a(i, c);
      s *= 2.0 / vnorm2;
      for (std::size_t i = k; i < n; ++i) a(i, c) -= s * v[i - k];
    }
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += q(r, i) * v[i - k];
      s *= 2.0 / vnorm2;
      for (std::size_t i = k; i < n; ++i) q(r, i) -= s * v[i - k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) r_diag[i] = a(i, i);
  return q;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  return splitmix64(seed ^ splitmix64(fnv1a(label)));
}

AxisAngle sample_axis_angle_params(Rng& rng, double max_angle) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, max_angle);
  AxisAngle out;
  double len = 0.0;
  do {
    for (double& x : out.axis) x = gauss(rng);
    len = norm(out.axis);
  } while (len < 1e-6);
  for (double& x : out.axis) x /= len;
  out.angle = uniform(rng);
  return out;
}

RotationMatrix sample_axis_angle(Rng& rng, double max_angle) {
  const AxisAngle aa = sample_axis_angle_params(rng, max_angle);
  return axis_angle_to_matrix(aa.axis, aa.angle);
}

RotationMatrix sample_uniform_so3(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::array<double, 4> q{};
  double len = 0.0;
  do {
    for (double& x : q) x = gauss(rng);
    len = norm(q);
  } while (len < 1e-6);
  for (double& x : q) x /= len;
  return RotationMatrix::trusted(unit_quaternion_matrix(q[0], q[1], q[2], q[3]));
}

RotationMatrix sample_uniform_so_n(std::size_t n, Rng& rng) {
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "SO(n) sampling needs n >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (double& x : g.data()) x = gauss(rng);
  Vector r_diag;
  Matrix q = householder_q(std::move(g), r_diag);
  for (std::size_t c = 0; c < n; ++c) {
    if (r_diag[c] < 0.0) {
      for (std::size_t r = 0; r < n; ++r) q(r, c) = -q(r, c);
    }
  }
  if (determinant(q) < 0.0) {
    for (std::size_t r = 0; r < n; ++r) q(r, n - 1) = -q(r, n - 1);
  }
  return RotationMatrix::trusted(std::move(q));
}

Matrix sample_uniform_o_n(std::size_t n, Rng& rng) {
  Matrix m = sample_uniform_so_n(n, rng).matrix();
  std::bernoulli_distribution flip(0.5);
  if (flip(rng)) {
    for (std::size_t r = 0; r < n; ++r) m(r, n - 1) = -m(r, n - 1);
  }
  return m;
}

}  // namespace rotrep
