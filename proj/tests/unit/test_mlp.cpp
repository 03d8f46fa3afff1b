#include <cmath>
#include <filesystem>

#include "rotrep/mlp.hpp"
#include "test_util.hpp"

using namespace rotrep;
using namespace rotrep::ad;

TEST(Mlp, Shapes) {
  Rng rng(1);
  const MlpModel m = MlpModel::sanity_encoder(6, rng);
  EXPECT_EQ(m.layers.size(), 4u);
  EXPECT_EQ(m.input_dim(), 9u);
  EXPECT_EQ(m.output_dim(), 6u);
  EXPECT_EQ(m.parameter_count(), 9u * 128 + 128 + 2 * (128 * 128 + 128) + 128 * 6 + 6);
  EXPECT_EQ(mlp_predict(m, Tensor::Ones(5, 9)).cols(), 6);
}

TEST(Mlp, InitBounds) {
  Rng rng(2);
  const MlpModel m = MlpModel::sanity_encoder(4, rng);
  for (const auto& l : m.layers) {
    const double bound = std::sqrt(1.0 / static_cast<double>(l.weight.rows()));
    EXPECT_LE(l.weight.cwiseAbs().maxCoeff(), bound);
    EXPECT_LE(l.bias.cwiseAbs().maxCoeff(), bound);
  }
}

TEST(Mlp, ZeroWeightsGiveZeroOutput) {
  Rng rng(3);
  MlpModel m = MlpModel::sanity_encoder(5, rng);
  for (Tensor* p : m.parameters()) p->setZero();
  Rng in_rng(4);
  std::normal_distribution<double> g;
  Tensor x(3, 9);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(in_rng);
  EXPECT_EQ(mlp_predict(m, x), Tensor::Zero(3, 5));
}

TEST(Mlp, ForwardMatchesPredictAndIsDeterministic) {
  Rng rng(5);
  const MlpModel m = MlpModel::sanity_encoder(6, rng);
  const Tensor x = Tensor::Random(7, 9);
  Tape t;
  const MlpTrace trace = mlp_forward(t, m, t.leaf(x));
  EXPECT_LT((t.value(trace.output) - mlp_predict(m, x)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(mlp_predict(m, x), mlp_predict(m, x));
  EXPECT_EQ(trace.params.size(), 8u);
}

TEST(Adam, ZeroGradientsLeaveParameters) {
  Rng rng(6);
  MlpModel m = MlpModel::create({3, 4, 2}, rng);
  const MlpModel before = m;
  AdamState s = AdamState::for_model(m);
  std::vector<Tensor> grads;
  for (const Tensor* p : m.parameters()) grads.push_back(Tensor::Zero(p->rows(), p->cols()));
  adam_step(m, grads, s);
  EXPECT_EQ(s.step, 1u);
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    EXPECT_EQ(m.layers[i].weight, before.layers[i].weight);
    EXPECT_EQ(m.layers[i].bias, before.layers[i].bias);
  }
}

TEST(Adam, FirstStepMovesBySignTimesLr) {
  Rng rng(7);
  MlpModel m = MlpModel::create({3, 2}, rng);
  const MlpModel before = m;
  AdamState s = AdamState::for_model(m);
  std::vector<Tensor> grads;
  for (const Tensor* p : m.parameters()) grads.push_back(Tensor::Random(p->rows(), p->cols()));
  adam_step(m, grads, s);
  const auto after = m.parameters();
  const auto orig = before.parameters();
  for (std::size_t i = 0; i < grads.size(); ++i)
    for (Eigen::Index j = 0; j < grads[i].size(); ++j) {
      const double g = grads[i].data()[j];
      EXPECT_NEAR(after[i]->data()[j] - orig[i]->data()[j], -1e-5 * (g > 0 ? 1 : -1), 1e-5 * 1e-3);
    }
}

TEST(Adam, Schedule) {
  const LrSchedule s;
  EXPECT_EQ(s.at(0), 1e-5);
  EXPECT_EQ(s.at(9999), 1e-5);
  EXPECT_EQ(s.at(10000), 1e-6);
}

TEST(Adam, ShapeMismatch) {
  Rng rng(8);
  MlpModel m = MlpModel::create({3, 2}, rng);
  AdamState s = AdamState::for_model(m);
  EXPECT_ROTREP_ERROR(adam_step(m, {Tensor::Zero(1, 1)}, s), ErrorKind::DimensionMismatch);
}

TEST(Checkpoint, RoundTripIsExact) {
  Rng rng(9);
  const MlpModel m = MlpModel::sanity_encoder(5, rng, 0.02);
  const auto path = std::filesystem::temp_directory_path() / "rotrep_ckpt_test.txt";
  save_checkpoint(m, path);
  const MlpModel back = load_checkpoint(path);
  EXPECT_EQ(back.leaky_slope, 0.02);
  ASSERT_EQ(back.layers.size(), m.layers.size());
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    EXPECT_EQ(back.layers[i].weight, m.layers[i].weight);
    EXPECT_EQ(back.layers[i].bias, m.layers[i].bias);
  }
  EXPECT_ROTREP_ERROR(load_checkpoint(path.string() + ".missing"), ErrorKind::IoError);
}
