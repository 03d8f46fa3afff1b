#include "rotrep/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rotrep/error.hpp"

namespace rotrep {

SymmetricEigen symmetric_eigen(const Matrix& sym) {
  if (!sym.is_square()) throw Error(ErrorKind::DimensionMismatch, "symmetric_eigen needs a square matrix");
  const std::size_t n = sym.rows();
  Matrix a = sym;
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = sign_nonneg(theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.set_column(k, v.column(order[k]));
  }
  return out;
}

std::vector<std::array<double, 2>> pca_top2(const std::vector<Vector>& points) {
  if (points.size() < 3) throw Error(ErrorKind::DimensionMismatch, "pca_top2 needs at least 3 points");
  const std::size_t d = points.front().size();
  if (d < 2) throw Error(ErrorKind::DimensionMismatch, "pca_top2 needs dimension >= 2");
  for (const auto& p : points) {
    if (p.size() != d) throw Error(ErrorKind::DimensionMismatch, "points have differing dimensions");
  }

  Vector mean(d, 0.0);
  for (const auto& p : points)
    for (std::size_t i = 0; i < d; ++i) mean[i] += p[i];
  for (double& m : mean) m /= static_cast<double>(points.size());

  std::vector<Vector> centered;
  centered.reserve(points.size());
  double spread = 0.0;
  for (const auto& p : points) {
    Vector c(d);
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = p[i] - mean[i];
      spread = std::max(spread, std::abs(c[i]));
    }
    centered.push_back(std::move(c));
  }
  if (spread == 0.0) throw Error(ErrorKind::DegenerateInput, "all points are identical");

  Matrix scatter(d, d);
  for (const auto& c : centered)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) scatter(i, j) += c[i] * c[j];

  const SymmetricEigen eig = symmetric_eigen(scatter);
  std::array<Vector, 2> axes{eig.vectors.column(0), eig.vectors.column(1)};
  for (auto& axis : axes) {
    const auto biggest = std::max_element(axis.begin(), axis.end(),
                                          [](double x, double y) { return std::abs(x) < std::abs(y); });
    if (*biggest < 0.0) {
      for (double& x : axis) x = -x;
    }
  }

  std::vector<std::array<double, 2>> out;
  out.reserve(centered.size());
  for (const auto& c : centered) out.push_back({dot(c, axes[0]), dot(c, axes[1])});
  return out;
}

}  // namespace rotrep
