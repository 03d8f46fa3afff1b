#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotrep/sampling.hpp"
#include "test_util.hpp"

using namespace rotrep;
using std::numbers::pi;

namespace {

template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

}  // namespace

TEST(Sampling, AxisAngleTraceMean) {
  Rng rng(1);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum += sample_axis_angle(rng).matrix().trace();
  EXPECT_NEAR(sum / draws, 1.0, 0.05);
}

TEST(Sampling, AxisAngleZeroAngleIsIdentity) {
  Rng rng(2);
  const auto m = sample_axis_angle(rng, 0.0);
  EXPECT_LT(max_diff(m.matrix(), Matrix::identity(3)), 1e-15);
}

TEST(Sampling, Deterministic) {
  Rng a(9), b(9);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_axis_angle(a).matrix(), sample_axis_angle(b).matrix());
    EXPECT_EQ(sample_uniform_so3(a).matrix(), sample_uniform_so3(b).matrix());
    EXPECT_EQ(sample_uniform_so_n(4, a).matrix(), sample_uniform_so_n(4, b).matrix());
  }
}

TEST(Sampling, HaarSo3AngleDistribution) {
  Rng rng(3);
  std::vector<double> angles;
  const RotationMatrix id;
  for (int i = 0; i < 100000; ++i) {
    const auto m = sample_uniform_so3(rng);
    ASSERT_TRUE(is_rotation(m.matrix()));
    angles.push_back(geodesic_distance(id, m));
  }
  // density (1 − cos θ)/π on [0, π]
  const double d = ks_statistic(angles, [](double t) { return (t - std::sin(t)) / pi; });
  EXPECT_LT(d, 0.01);
}

TEST(Sampling, SoNInvariants) {
  Rng rng(4);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int i = 0; i < 10000; ++i) {
      const auto m = sample_uniform_so_n(n, rng);
      ASSERT_LE(orthogonality_error(m.matrix()), 1e-9);
      ASSERT_NEAR(determinant(m.matrix()), 1.0, 1e-9);
    }
  }
}

TEST(Sampling, So2AngleUniform) {
  Rng rng(5);
  std::vector<double> angles;
  for (int i = 0; i < 100000; ++i) {
    const auto m = sample_uniform_so_n(2, rng);
    double a = std::atan2(m(1, 0), m(0, 0));
    if (a < 0) a += 2 * pi;
    angles.push_back(a);
  }
  EXPECT_LT(ks_statistic(angles, [](double t) { return t / (2 * pi); }), 0.01);
}

TEST(Sampling, OnHasBothDeterminants) {
  Rng rng(6);
  int negative = 0;
  for (int i = 0; i < 1000; ++i) {
    const Matrix m = sample_uniform_o_n(3, rng);
    ASSERT_LE(orthogonality_error(m), 1e-9);
    negative += determinant(m) < 0;
  }
  EXPECT_GT(negative, 400);
  EXPECT_LT(negative, 600);
}

TEST(Sampling, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, "train"), derive_seed(1, "test"));
  EXPECT_NE(derive_seed(1, "train"), derive_seed(2, "train"));
  EXPECT_EQ(derive_seed(1, "train"), derive_seed(1, "train"));
}
