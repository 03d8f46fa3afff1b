#include <cmath>
#include <numbers>

#include "rotrep/decoders.hpp"
#include "rotrep/gradcheck.hpp"
#include "rotrep/sampling.hpp"
#include "test_util.hpp"

using namespace rotrep;
using namespace rotrep::ad;

namespace {

Tensor row(const std::vector<double>& v) {
  Tensor t(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) t(0, static_cast<Eigen::Index>(i)) = v[i];
  return t;
}

RotationMatrix draw(std::size_t n, Rng& rng) { return n == 3 ? sample_uniform_so3(rng) : sample_uniform_so_n(n, rng); }

}  // namespace

class DecoderAgreement : public ::testing::TestWithParam<std::pair<const char*, std::size_t>> {};

TEST_P(DecoderAgreement, MatchesRepsDecode) {
  const auto [name, n] = GetParam();
  const RepresentationKind kind = parse_kind(name, n);
  Rng rng(derive_seed(5, kind.name()));
  std::normal_distribution<double> noise(0.0, 0.3);
  const std::size_t dim = kind.dimension();
  // one batch of 1000 perturbed encodings
  Tensor batch(1000, static_cast<Eigen::Index>(dim));
  for (Eigen::Index b = 0; b < batch.rows(); ++b) {
    const ReprVector r = encode(kind, draw(n, rng));
    for (std::size_t j = 0; j < dim; ++j) batch(b, static_cast<Eigen::Index>(j)) = r.data[j] + noise(rng);
  }
  Tape t;
  const Tensor out = t.value(decoder_forward(t, kind, t.leaf(batch)));
  for (Eigen::Index b = 0; b < batch.rows(); ++b) {
    const RotationMatrix m = decode(kind, std::span<const double>(batch.row(b).data(), dim));
    ASSERT_LT(max_diff(std::span<const double>(out.row(b).data(), n * n), m.matrix().data()), 1e-12)
        << kind.name() << " row " << b;
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllKinds, DecoderAgreement,
    ::testing::Values(std::pair{"twod", 2u}, std::pair{"euler", 3u}, std::pair{"quat", 3u}, std::pair{"uquat", 3u},
                      std::pair{"hquat", 3u}, std::pair{"axisangle", 3u}, std::pair{"rodriguez", 3u},
                      std::pair{"gs", 3u}, std::pair{"proj", 3u}, std::pair{"raw", 3u}, std::pair{"gs", 4u},
                      std::pair{"proj", 4u}, std::pair{"mp2", 4u}, std::pair{"gs", 5u}, std::pair{"mp3", 5u}),
    [](const auto& info) { return std::string(info.param.first) + "_n" + std::to_string(info.param.second); });

TEST(Decoders, OracleExamples) {
  Rng rng(3);
  const RotationMatrix m = sample_uniform_so3(rng);
  for (const auto& kind : {RepresentationKind::gram_schmidt(3), RepresentationKind::projected(3)}) {
    Tape t;
    const Tensor out = t.value(decoder_forward(t, kind, t.leaf(row(encode(kind, m).data))));
    EXPECT_LT(max_diff(std::span<const double>(out.data(), 9), m.matrix().data()), 1e-9);
  }
  const std::vector<double> q{0.3, -0.2, 0.9, 0.4};
  Tape t;
  const Tensor out = t.value(decoder_forward(t, RepresentationKind::quaternion(), t.leaf(row(q))));
  EXPECT_LT(max_diff(std::span<const double>(out.data(), 9), quat_f(q).matrix().data()), 1e-12);
}

TEST(Decoders, ErrorsMatchReps) {
  Tape t;
  EXPECT_ROTREP_ERROR(decoder_forward(t, RepresentationKind::gram_schmidt(3), t.leaf(row({1, 0, 0, 2, 0, 0}))),
                      ErrorKind::DegenerateInput);
  EXPECT_ROTREP_ERROR(decoder_forward(t, RepresentationKind::quaternion(), t.leaf(row({0, 0, 0, 0}))),
                      ErrorKind::NearZeroInput);
  EXPECT_ROTREP_ERROR(decoder_forward(t, RepresentationKind::axis_angle(), t.leaf(row({0, 0, 0, 1}))),
                      ErrorKind::NearZeroAxis);
  EXPECT_ROTREP_ERROR(decoder_forward(t, RepresentationKind::gram_schmidt(3), t.leaf(row({1, 0, 0}))),
                      ErrorKind::DimensionMismatch);
}

TEST(Losses, L2Examples) {
  Tape t;
  const Var id = t.leaf(pack_rotations({RotationMatrix()}));
  const Var flip = t.leaf(pack_rotations({RotationMatrix(Matrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}})}));
  EXPECT_EQ(t.value(loss_l2(t, id, id))(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(t.value(loss_l2(t, id, flip))(0, 0), 8.0);
}

TEST(Losses, L2IsBatchMean) {
  Tape t;
  const Var a = t.leaf(pack_rotations({RotationMatrix(), RotationMatrix()}));
  const Var b = t.leaf(pack_rotations({RotationMatrix(), rot_x(std::numbers::pi)}));
  EXPECT_DOUBLE_EQ(t.value(loss_l2(t, a, b))(0, 0), 4.0);
}

TEST(Losses, GeodesicExamples) {
  Tape t;
  const Var id = t.leaf(pack_rotations({RotationMatrix()}));
  const Var quarter = t.leaf(pack_rotations({rot_z(std::numbers::pi / 2)}));
  const double floor = std::acos(1 - 1e-7);
  EXPECT_NEAR(t.value(loss_geodesic(t, id, id))(0, 0), floor, 1e-12);
  EXPECT_NEAR(floor, 4.5e-4, 1e-5);
  EXPECT_NEAR(t.value(loss_geodesic(t, id, quarter))(0, 0), std::numbers::pi / 2, 1e-6);
}

TEST(Losses, GeodesicGradientFiniteAtZeroError) {
  Rng rng(4);
  const RotationMatrix m = sample_uniform_so3(rng);
  Tape t;
  const Var r = t.leaf(row(gram_schmidt_g(m).data));
  const Var l = loss_geodesic(t, decoder_forward(t, RepresentationKind::gram_schmidt(3), r),
                              t.leaf(pack_rotations({m})));
  t.backward(l);
  EXPECT_TRUE(t.grad(r).allFinite());
}

TEST(GradCheck, ContinuousAndDiscontinuousDecoders) {
  for (const char* name : {"gs6", "p5", "quat", "axisangle"}) {
    for (auto loss : {LossKind::L2, LossKind::Geodesic}) {
      const auto r = gradcheck_decoder(parse_kind(name), loss, 100, 17);
      EXPECT_EQ(r.points, 100u) << name;
      EXPECT_LT(r.max_rel_error, 1e-4) << name << ' ' << to_string(loss);
    }
  }
}

TEST(GradCheck, GeodesicNeedsSo3) {
  EXPECT_ROTREP_ERROR(gradcheck_decoder(RepresentationKind::gram_schmidt(4), LossKind::Geodesic, 1, 0),
                      ErrorKind::DimensionMismatch);
}
