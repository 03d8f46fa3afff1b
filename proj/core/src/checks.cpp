#include "rotrep/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rotrep {

namespace {

RotationMatrix draw_rotation(std::size_t n, std::size_t i, Rng& rng) {
  if (n == 3) return i % 2 == 0 ? sample_uniform_so3(rng) : sample_axis_angle(rng);
  return sample_uniform_so_n(n, rng);
}

double similarity_error(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SimilarityTransform t;
  t.scale = std::exp(gauss(rng));
  t.rotation = sample_uniform_so_n(n, rng).matrix();
  t.translation.resize(n);
  for (auto& v : t.translation) v = 3.0 * gauss(rng);
  const SimilarityTransform back = similarity_f(similarity_g(t).data, n);
  const double mat = frobenius_norm(back.scale * back.rotation - t.scale * t.rotation);
  double trans = 0.0;
  for (std::size_t i = 0; i < n; ++i) trans += std::pow(back.translation[i] - t.translation[i], 2);
  return std::sqrt(mat * mat + trans);
}

}  // namespace

RoundTripSummary roundtrip_suite(const RepresentationKind& kind, std::size_t samples, Rng& rng) {
  RoundTripSummary s;
  s.kind = kind;
  s.samples = samples;
  const std::size_t n = kind.n;
  if (kind.tag == ReprTag::Similarity) {
    s.spec = {RoundTripMetric::Frobenius, kSimilarityTolerance};
    for (std::size_t i = 0; i < samples; ++i) s.max_error = std::max(s.max_error, similarity_error(n, rng));
    return s;
  }
  s.spec = roundtrip_spec(kind);
  for (std::size_t i = 0; i < samples; ++i) {
    double err = 0.0;
    if (kind.tag == ReprTag::Orthogonal) {
      const Matrix m = sample_uniform_o_n(n, rng);
      err = frobenius_norm(orthogonal_f(orthogonal_g(m).data, n) - m);
    } else {
      err = roundtrip_error(kind, draw_rotation(n, i, rng));
    }
    // NaN must fail, not vanish inside max
    if (!(err == err)) err = std::numeric_limits<double>::infinity();
    s.max_error = std::max(s.max_error, err);
  }
  return s;
}

double composition_gap(std::size_t n, std::size_t pairs, Rng& rng) {
  double gap = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const RotationMatrix a = sample_uniform_so_n(n, rng);
    const RotationMatrix b = sample_uniform_so_n(n, rng);
    const ReprVector r1 = gram_schmidt_g(a);
    const ReprVector r2 = gram_schmidt_g(b);
    const ReprVector fast = repr_compose(r1.data, r2.data, n);
    const ReprVector slow = gram_schmidt_g(gram_schmidt_f(r1.data, n) * gram_schmidt_f(r2.data, n));
    for (std::size_t j = 0; j < fast.data.size(); ++j) gap = std::max(gap, std::abs(fast.data[j] - slow.data[j]));
  }
  return gap;
}

}  // namespace rotrep
