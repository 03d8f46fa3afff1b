#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "rotrep/probe.hpp"
#include "test_util.hpp"

using namespace rotrep;
using std::numbers::pi;

TEST(AxisCurve, Basics) {
  const RotationCurve c = make_axis_curve(Axis::Z, 360);
  EXPECT_EQ(c.samples.size(), 360u);
  EXPECT_DOUBLE_EQ(c.step, 2 * pi / 360);
  EXPECT_EQ(c.samples.front().rotation.matrix(), Matrix::identity(3));
  EXPECT_LT(max_diff(c.samples[90].rotation.matrix(), Matrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}), 1e-15);
  EXPECT_ROTREP_ERROR(make_axis_curve(Axis::X, 7), ErrorKind::DegenerateInput);
}

TEST(Jump, GramSchmidtIsSmooth) {
  const RotationCurve c = make_axis_curve(Axis::Z, 10000);
  const JumpReport r = jump_statistic(RepresentationKind::gram_schmidt(3), c);
  EXPECT_LE(r.max_jump, 2 * c.step);
}

TEST(Jump, EulerWraps) {
  const RotationCurve c = make_axis_curve(Axis::Z, 10000);
  EXPECT_GE(jump_statistic(RepresentationKind::euler(), c).max_jump, 2 * pi - 1e-2);
}

TEST(Jump, UnitQuaternionFlipsNearPi) {
  const RotationCurve c = make_axis_curve(Axis::Z, 10000);
  const JumpReport r = jump_statistic(RepresentationKind::unit_quaternion(), c);
  EXPECT_GE(r.max_jump, 1.9);
  EXPECT_NEAR(r.max_jump_theta, pi, 2 * c.step);
}

TEST(Jump, ContinuousKindsStableUnderRefinement) {
  for (const auto& kind : {RepresentationKind::gram_schmidt(3), RepresentationKind::projected(3)}) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const double l3 = jump_statistic(kind, make_axis_curve(a, 1000)).fitted_lipschitz;
      const double l4 = jump_statistic(kind, make_axis_curve(a, 10000)).fitted_lipschitz;
      const double l5 = jump_statistic(kind, make_axis_curve(a, 100000)).fitted_lipschitz;
      EXPECT_LT(std::max({l3, l4, l5}) / std::min({l3, l4, l5}), 2.0) << kind.name() << axis_label(a);
    }
  }
}

TEST(Jump, DiscontinuousKindsGrowUnderRefinement) {
  for (const auto& kind : {RepresentationKind::euler(), RepresentationKind::quaternion(),
                           RepresentationKind::unit_quaternion(), RepresentationKind::hemi_quaternion(),
                           RepresentationKind::axis_angle(), RepresentationKind::rodriguez()}) {
    double best = 0.0;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const double l3 = jump_statistic(kind, make_axis_curve(a, 1000)).fitted_lipschitz;
      const double l4 = jump_statistic(kind, make_axis_curve(a, 10000)).fitted_lipschitz;
      best = std::max(best, l4 / l3);
    }
    EXPECT_GE(best, 10.0 * 0.99) << kind.name();
  }
}

TEST(Jump, PhaseInvariant) {
  RotationCurve c = make_axis_curve(Axis::Y, 1000);
  const double before = jump_statistic(RepresentationKind::euler(), c).max_jump;
  std::rotate(c.samples.begin(), c.samples.begin() + 123, c.samples.end());
  EXPECT_DOUBLE_EQ(jump_statistic(RepresentationKind::euler(), c).max_jump, before);
}

TEST(PcaExport, RawLoopCloses) {
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    const RotationCurve c = make_axis_curve(a, 1000);
    const auto rows = pca_curves({RepresentationKind::raw_matrix(3)}, {c});
    ASSERT_EQ(rows.size(), 1000u);
    // wrap gap equals every other adjacent gap on a closed loop
    const double wrap = std::hypot(rows.back().pc1 - rows.front().pc1, rows.back().pc2 - rows.front().pc2);
    const double step = std::hypot(rows[1].pc1 - rows[0].pc1, rows[1].pc2 - rows[0].pc2);
    EXPECT_NEAR(wrap, step, 1e-9);
  }
}

TEST(PcaExport, EulerGapAtWrap) {
  const auto rows = pca_curves({RepresentationKind::euler()}, {make_axis_curve(Axis::Z, 1000)});
  double max_gap = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = rows[i];
    const auto& q = rows[(i + 1) % rows.size()];
    max_gap = std::max(max_gap, std::hypot(q.pc1 - p.pc1, q.pc2 - p.pc2));
  }
  EXPECT_GE(max_gap, 1.0);
}

TEST(PcaExport, CsvRoundTripIsExact) {
  const auto dir = std::filesystem::temp_directory_path() / "rotrep_probe_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "curves.csv";
  const std::vector<RepresentationKind> kinds{RepresentationKind::gram_schmidt(3), RepresentationKind::euler()};
  const std::vector<RotationCurve> curves{make_axis_curve(Axis::X, 64), make_axis_curve(Axis::Z, 64)};
  export_pca_curves(kinds, curves, path);
  const auto expected = pca_curves(kinds, curves);
  const auto got = read_pca_csv(path);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].representation, expected[i].representation);
    EXPECT_EQ(got[i].axis, expected[i].axis);
    EXPECT_EQ(got[i].theta, expected[i].theta);
    EXPECT_EQ(got[i].pc1, expected[i].pc1);
    EXPECT_EQ(got[i].pc2, expected[i].pc2);
  }
  EXPECT_ROTREP_ERROR(export_pca_curves(kinds, curves, dir / "missing" / "x.csv"), ErrorKind::IoError);
}
