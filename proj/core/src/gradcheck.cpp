#include "rotrep/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "rotrep/sampling.hpp"

namespace rotrep::ad {

namespace {

RotationMatrix random_rotation(std::size_t n, Rng& rng) {
  return n == 3 ? sample_uniform_so3(rng) : sample_uniform_so_n(n, rng);
}

struct Evaluation {
  double loss = 0.0;
  double min_norm = 0.0;
  double min_acos = 0.0;
  Tensor grad;
};

// nullopt when the decoder refuses the point
std::optional<Evaluation> evaluate(const RepresentationKind& kind, LossKind loss_kind, const Tensor& r,
                                   const Tensor& truth, bool with_grad) {
  Tape t;
  try {
    const Var x = t.leaf(r);
    const Var pred = decoder_forward(t, kind, x);
    const Var l = loss(t, loss_kind, pred, t.leaf(truth));
    Evaluation e;
    e.loss = t.value(l)(0, 0);
    e.min_norm = t.smallest_normalized_norm();
    e.min_acos = t.smallest_acos_margin();
    if (with_grad) {
      t.backward(l);
      e.grad = t.grad(x);
    }
    return e;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

GradCheckResult gradcheck_decoder(const RepresentationKind& kind, LossKind loss_kind, std::size_t points,
                                  std::uint64_t seed, double h, double margin) {
  if (!kind.is_rotation_kind()) throw Error(ErrorKind::InvalidKind, kind.name() + " has no differentiable decoder");
  if (loss_kind == LossKind::Geodesic && kind.n != 3) {
    throw Error(ErrorKind::DimensionMismatch, "geodesic loss is defined for 3x3 rotations only");
  }
  Rng rng(derive_seed(seed, "gradcheck/" + kind.name() + "/" + std::string(to_string(loss_kind))));
  std::normal_distribution<double> noise(0.0, 0.3);
  const std::size_t dim = kind.dimension();
  const std::size_t n = kind.n;

  GradCheckResult result{kind, loss_kind, 0, 0, 0.0};
  const std::size_t max_attempts = 50 * std::max<std::size_t>(points, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && result.points < points; ++attempt) {
    const ReprVector base = encode(kind, random_rotation(n, rng));
    Tensor r(1, static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) r(0, static_cast<Eigen::Index>(i)) = base.data[i] + noise(rng);
    const Tensor truth = pack_rotations({random_rotation(n, rng)});

    const auto centre = evaluate(kind, loss_kind, r, truth, true);
    if (!centre || centre->min_norm < margin || centre->min_acos < margin) {
      ++result.rejected;
      continue;
    }
    Tensor numeric(1, static_cast<Eigen::Index>(dim));
    bool ok = true;
    for (Eigen::Index i = 0; i < numeric.cols() && ok; ++i) {
      Tensor plus = r, minus = r;
      plus(0, i) += h;
      minus(0, i) -= h;
      const auto fp = evaluate(kind, loss_kind, plus, truth, false);
      const auto fm = evaluate(kind, loss_kind, minus, truth, false);
      if (!fp || !fm) {
        ok = false;
        break;
      }
      numeric(0, i) = (fp->loss - fm->loss) / (2.0 * h);
    }
    if (!ok) {
      ++result.rejected;
      continue;
    }
    const double denom = std::max({centre->grad.norm(), numeric.norm(), 1e-8});
    result.max_rel_error = std::max(result.max_rel_error, (centre->grad - numeric).norm() / denom);
    ++result.points;
  }
  return result;
}

}  // namespace rotrep::ad
