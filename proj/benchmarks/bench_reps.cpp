#include <benchmark/benchmark.h>

#include "rotrep/reps.hpp"
#include "rotrep/sampling.hpp"

using namespace rotrep;

namespace {

std::vector<RotationMatrix> draws(std::size_t n, std::size_t count) {
  Rng rng(1);
  std::vector<RotationMatrix> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_uniform_so_n(n, rng));
  return out;
}

void BM_Encode(benchmark::State& state, const char* name) {
  const RepresentationKind kind = parse_kind(name);
  const auto ms = draws(3, 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(encode(kind, ms[i++ % ms.size()]));
}

void BM_Decode(benchmark::State& state, const char* name) {
  const RepresentationKind kind = parse_kind(name);
  std::vector<ReprVector> rs;
  for (const auto& m : draws(3, 256)) rs.push_back(encode(kind, m));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decode(kind, rs[i++ % rs.size()].data));
}

void BM_ComposeFast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ms = draws(n, 2);
  const auto r1 = gram_schmidt_g(ms[0]), r2 = gram_schmidt_g(ms[1]);
  for (auto _ : state) benchmark::DoNotOptimize(repr_compose(r1.data, r2.data, n));
}

void BM_ComposeSlow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ms = draws(n, 2);
  const auto r1 = gram_schmidt_g(ms[0]), r2 = gram_schmidt_g(ms[1]);
  for (auto _ : state)
    benchmark::DoNotOptimize(gram_schmidt_g(gram_schmidt_f(r1.data, n) * gram_schmidt_f(r2.data, n)));
}

void BM_SampleHaar(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_uniform_so_n(n, rng));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Encode, gs6, "gs6");
BENCHMARK_CAPTURE(BM_Encode, p5, "p5");
BENCHMARK_CAPTURE(BM_Encode, quat, "quat");
BENCHMARK_CAPTURE(BM_Encode, axisangle, "axisangle");
BENCHMARK_CAPTURE(BM_Encode, euler, "euler");
BENCHMARK_CAPTURE(BM_Decode, gs6, "gs6");
BENCHMARK_CAPTURE(BM_Decode, p5, "p5");
BENCHMARK_CAPTURE(BM_Decode, quat, "quat");
BENCHMARK_CAPTURE(BM_Decode, axisangle, "axisangle");
BENCHMARK_CAPTURE(BM_Decode, euler, "euler");
BENCHMARK(BM_ComposeFast)->Arg(3)->Arg(4)->Arg(8);
BENCHMARK(BM_ComposeSlow)->Arg(3)->Arg(4)->Arg(8);
BENCHMARK(BM_SampleHaar)->Arg(3)->Arg(6);
