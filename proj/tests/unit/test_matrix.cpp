#include <cmath>
#include <random>

#include "rotrep/matrix.hpp"
#include "test_util.hpp"

using namespace rotrep;

TEST(Normalize, AxisCase) {
  const Vector v = normalize(Vector{3, 0, 0});
  EXPECT_EQ(v, (Vector{1, 0, 0}));
}

TEST(Normalize, Symmetric) {
  const Vector v = normalize(Vector{1, 1, 0, 0});
  EXPECT_NEAR(v[0], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(v[1], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_EQ(v[2], 0.0);
}

TEST(Normalize, NearZero) { EXPECT_ROTREP_ERROR(normalize(Vector{1e-15, 0}), ErrorKind::NearZeroInput); }

TEST(GeneralizedCross, RightHandedBasis) {
  EXPECT_EQ(generalized_cross({{1, 0, 0}, {0, 1, 0}}), (Vector{0, 0, 1}));
}

TEST(GeneralizedCross, FourDimensional) {
  const Vector e4 = generalized_cross({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}});
  EXPECT_EQ(e4, (Vector{0, 0, 0, 1}));
}

TEST(GeneralizedCross, MatchesCrossProduct) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 1000; ++i) {
    const Vector a{g(rng), g(rng), g(rng)}, b{g(rng), g(rng), g(rng)};
    EXPECT_LT(max_diff(generalized_cross({a, b}), cross(a, b)), 1e-12);
  }
}

TEST(GeneralizedCross, OrthogonalAndDetPlusOne) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<Vector> vs(n - 1, Vector(n));
    for (auto& v : vs)
      for (auto& x : v) x = g(rng);
    const Vector c = generalized_cross(vs);
    for (const auto& v : vs) EXPECT_NEAR(dot(v, c), 0.0, 1e-10);
    auto cols = vs;
    cols.push_back(c);
    EXPECT_GT(determinant(Matrix::from_columns(cols)), 0.0);
  }
}

TEST(GeneralizedCross, DimensionMismatch) {
  EXPECT_ROTREP_ERROR(generalized_cross({{1, 0, 0}, {0, 1}}), ErrorKind::DimensionMismatch);
}

TEST(Determinant, CofactorAndLuAgree) {
  const Matrix m{{2, 1, 0, 0, 0}, {1, 3, 1, 0, 0}, {0, 1, 4, 1, 0}, {0, 0, 1, 5, 1}, {0, 0, 0, 1, 6}};
  // tridiagonal recurrence: d_k = a_k d_{k-1} - d_{k-2}
  double d0 = 1, d1 = 2;
  for (double a : {3.0, 4.0, 5.0, 6.0}) {
    const double d2 = a * d1 - d0;
    d0 = d1;
    d1 = d2;
  }
  EXPECT_NEAR(determinant(m), d1, 1e-9);
  EXPECT_DOUBLE_EQ(determinant(Matrix{{1, 2}, {3, 4}}), -2.0);
}

TEST(Matrix, Products) {
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(a * Matrix::identity(2), a);
  EXPECT_EQ(a.transpose(), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_DOUBLE_EQ(a.trace(), 5.0);
  EXPECT_EQ((a * Vector{1, 1}), (Vector{3, 7}));
  EXPECT_DOUBLE_EQ(frobenius_norm(a), std::sqrt(30.0));
}

TEST(Matrix, ShapeAndFiniteness) {
  EXPECT_ROTREP_ERROR(Matrix(2, 2, Vector{1.0, 2.0, 3.0}), ErrorKind::DimensionMismatch);
  EXPECT_FALSE(Matrix(1, 2, Vector{1.0, NAN}).all_finite());
  EXPECT_TRUE(Matrix::identity(3).all_finite());
}

TEST(SignNonneg, ZeroIsPositive) {
  EXPECT_EQ(sign_nonneg(0.0), 1.0);
  EXPECT_EQ(sign_nonneg(-0.0), 1.0);
  EXPECT_EQ(sign_nonneg(-2.0), -1.0);
}
