#include <benchmark/benchmark.h>

#include "rotrep/decoders.hpp"
#include "rotrep/mlp.hpp"
#include "rotrep/sampling.hpp"

using namespace rotrep;
using namespace rotrep::ad;

namespace {

std::vector<RotationMatrix> batch(std::size_t size) {
  Rng rng(3);
  std::vector<RotationMatrix> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(sample_uniform_so3(rng));
  return out;
}

// one full training step: MLP, decoder, loss, backward, Adam
void BM_TrainStep(benchmark::State& state, const char* name) {
  const RepresentationKind kind = parse_kind(name);
  Rng rng(4);
  MlpModel model = MlpModel::sanity_encoder(kind.dimension(), rng);
  AdamState adam = AdamState::for_model(model);
  const Tensor x = pack_rotations(batch(64));
  for (auto _ : state) {
    Tape t;
    const MlpTrace trace = mlp_forward(t, model, t.leaf(x));
    const Var l = loss_l2(t, decoder_forward(t, kind, trace.output), t.leaf(x));
    t.backward(l);
    std::vector<Tensor> grads;
    for (Var p : trace.params) grads.push_back(t.grad(p));
    adam_step(model, grads, adam);
  }
}

void BM_DecoderForwardBackward(benchmark::State& state, const char* name) {
  const RepresentationKind kind = parse_kind(name);
  const auto rs = batch(64);
  Tensor r(64, static_cast<Eigen::Index>(kind.dimension()));
  for (Eigen::Index b = 0; b < 64; ++b) {
    const auto v = encode(kind, rs[static_cast<std::size_t>(b)]).data;
    for (std::size_t j = 0; j < v.size(); ++j) r(b, static_cast<Eigen::Index>(j)) = v[j];
  }
  const Tensor truth = pack_rotations(rs);
  for (auto _ : state) {
    Tape t;
    const Var in = t.leaf(r);
    t.backward(loss_geodesic(t, decoder_forward(t, kind, in), t.leaf(truth)));
    benchmark::DoNotOptimize(t.grad(in).data());
  }
}

void BM_Predict(benchmark::State& state) {
  Rng rng(5);
  const MlpModel model = MlpModel::sanity_encoder(6, rng);
  const Tensor x = pack_rotations(batch(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(mlp_predict(model, x).data());
}

}  // namespace

BENCHMARK_CAPTURE(BM_TrainStep, gs6, "gs6");
BENCHMARK_CAPTURE(BM_TrainStep, p5, "p5");
BENCHMARK_CAPTURE(BM_TrainStep, euler, "euler");
BENCHMARK_CAPTURE(BM_DecoderForwardBackward, gs6, "gs6");
BENCHMARK_CAPTURE(BM_DecoderForwardBackward, p5, "p5");
BENCHMARK_CAPTURE(BM_DecoderForwardBackward, quat, "quat");
BENCHMARK(BM_Predict)->Arg(64)->Arg(10000);
