#include <cmath>
#include <numbers>

#include "rotrep/pca.hpp"
#include "rotrep/sampling.hpp"
#include "test_util.hpp"

using namespace rotrep;

TEST(Pca, PlanarCircleKeepsRadius) {
  Rng rng(8);
  const Matrix q = sample_uniform_so_n(6, rng).matrix();
  const Vector c{1, -2, 3, 0.5, 0, 7};
  std::vector<Vector> pts;
  for (int i = 0; i < 100; ++i) {
    const double t = 2 * std::numbers::pi * i / 100;
    Vector p = c;
    for (std::size_t r = 0; r < 6; ++r) p[r] += 2.5 * (std::cos(t) * q(r, 0) + std::sin(t) * q(r, 1));
    pts.push_back(p);
  }
  for (const auto& xy : pca_top2(pts)) EXPECT_NEAR(std::hypot(xy[0], xy[1]), 2.5, 1e-9);
}

TEST(Pca, CollinearHasFlatSecondAxis) {
  std::vector<Vector> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({1.0 * i, 2.0 * i, -1.0 * i});
  for (const auto& xy : pca_top2(pts)) EXPECT_NEAR(xy[1], 0.0, 1e-9);
}

TEST(Pca, Centered) {
  Rng rng(9);
  std::normal_distribution<double> g;
  std::vector<Vector> pts(50, Vector(4));
  for (auto& p : pts)
    for (auto& x : p) x = g(rng) + 3.0;
  double s0 = 0, s1 = 0;
  for (const auto& xy : pca_top2(pts)) {
    s0 += xy[0];
    s1 += xy[1];
  }
  EXPECT_NEAR(s0 / 50, 0.0, 1e-12);
  EXPECT_NEAR(s1 / 50, 0.0, 1e-12);
}

TEST(Pca, IdenticalPointsDegenerate) {
  EXPECT_ROTREP_ERROR(pca_top2({{1, 2}, {1, 2}, {1, 2}}), ErrorKind::DegenerateInput);
}

TEST(Pca, SymmetricEigenDiagonal) {
  const auto e = symmetric_eigen(Matrix{{1, 0, 0}, {0, 3, 0}, {0, 0, 2}});
  EXPECT_EQ(e.values, (Vector{3, 2, 1}));
}
