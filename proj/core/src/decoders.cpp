#include "rotrep/decoders.hpp"

#include <sstream>

namespace rotrep::ad {

namespace {

constexpr double kGsEps = 1e-9;
constexpr double kUnitEps = 1e-12;

using Grid = std::vector<std::vector<Var>>;  // [row][col], each B×1

Var det_grid(Tape& t, const Grid& g) {
  const std::size_t m = g.size();
  if (m == 1) return g[0][0];
  if (m == 2) return t.sub(t.mul(g[0][0], g[1][1]), t.mul(g[0][1], g[1][0]));
  Var acc{};
  for (std::size_t r = 0; r < m; ++r) {
    Grid minor;
    for (std::size_t rr = 0; rr < m; ++rr) {
      if (rr == r) continue;
      minor.emplace_back(g[rr].begin() + 1, g[rr].end());
    }
    const Var term = t.mul(g[r][0], det_grid(t, minor));
    if (acc.id < 0) acc = term;
    else acc = (r % 2 == 0) ? t.add(acc, term) : t.sub(acc, term);
  }
  return acc;
}

Var generalized_cross_tape(Tape& t, const std::vector<Var>& b, std::size_t n) {
  if (n == 2) return t.concat_cols({t.scale(t.cols(b[0], 1, 1), -1.0), t.cols(b[0], 0, 1)});
  if (n == 3) return t.cross_rows(b[0], b[1]);
  Grid entries(n, std::vector<Var>(n - 1));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c + 1 < n; ++c) entries[r][c] = t.cols(b[c], r, 1);
  std::vector<Var> out;
  for (std::size_t i = 0; i < n; ++i) {
    Grid minor;
    for (std::size_t r = 0; r < n; ++r)
      if (r != i) minor.push_back(entries[r]);
    const Var d = det_grid(t, minor);
    out.push_back(((i + n - 1) % 2 == 0) ? d : t.scale(d, -1.0));
  }
  return t.concat_cols(out);
}

/// Column vectors b_1 … b_n packed row-major as B×n².
Var pack_columns_row_major(Tape& t, const std::vector<Var>& b, std::size_t n) {
  const Var col_major = t.concat_cols(b);
  std::vector<int> index(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) index[i * n + j] = static_cast<int>(j * n + i);
  return t.gather_cols(col_major, std::move(index));
}

Var gram_schmidt_tape(Tape& t, const std::vector<Var>& a, std::size_t n) {
  std::vector<Var> b;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Var residual = a[i];
    for (const Var& bj : b) residual = t.sub(residual, t.mul_col(bj, t.dot_rows(bj, a[i])));
    b.push_back(t.normalize_rows(residual, kGsEps, ErrorKind::DegenerateInput));
  }
  b.push_back(generalized_cross_tape(t, b, n));
  return pack_columns_row_major(t, b, n);
}

std::vector<Var> split_columns(Tape& t, Var r, std::size_t n, std::size_t count, std::size_t offset = 0) {
  std::vector<Var> cols;
  for (std::size_t c = 0; c < count; ++c) cols.push_back(t.cols(r, offset + c * n, n));
  return cols;
}

struct Unprojected {
  Var first;  // B×1
  Var rest;   // B×(m−1)
};

Unprojected unproject_tape(Tape& t, Var u) {
  const Var norm2 = t.dot_rows(u, u);
  const Var inv_len = t.reciprocal(t.sqrt(norm2));
  const Var first = t.mul(t.scale(t.add_scalar(norm2, -1.0), 0.5), inv_len);
  const Var rest = t.normalize_rows(u, kUnitEps, ErrorKind::NearZeroInput);
  return {first, rest};
}

Var rodrigues_tape(Tape& t, Var axis, Var theta) {
  const Var x = t.cols(axis, 0, 1), y = t.cols(axis, 1, 1), z = t.cols(axis, 2, 1);
  const Var c = t.cos(theta), s = t.sin(theta);
  const Var k = t.add_scalar(t.scale(c, -1.0), 1.0);
  auto diag = [&](Var a) { return t.add(c, t.mul(k, t.mul(a, a))); };
  auto off = [&](Var a, Var b, Var w, double sign) {
    return t.add(t.mul(k, t.mul(a, b)), t.scale(t.mul(s, w), sign));
  };
  return t.concat_cols({
      diag(x), off(x, y, z, -1.0), off(x, z, y, +1.0),
      off(x, y, z, +1.0), diag(y), off(y, z, x, -1.0),
      off(x, z, y, -1.0), off(y, z, x, +1.0), diag(z),
  });
}

Var quaternion_tape(Tape& t, Var r) {
  const Var q = t.normalize_rows(r, kUnitEps, ErrorKind::NearZeroInput);
  const Var x = t.cols(q, 0, 1), y = t.cols(q, 1, 1), z = t.cols(q, 2, 1), w = t.cols(q, 3, 1);
  auto one_minus = [&](Var a, Var b) { return t.add_scalar(t.scale(t.add(t.mul(a, a), t.mul(b, b)), -2.0), 1.0); };
  auto twice_sum = [&](Var a, Var b, Var c, Var d) { return t.scale(t.add(t.mul(a, b), t.mul(c, d)), 2.0); };
  auto twice_diff = [&](Var a, Var b, Var c, Var d) { return t.scale(t.sub(t.mul(a, b), t.mul(c, d)), 2.0); };
  return t.concat_cols({
      one_minus(y, z), twice_diff(x, y, z, w), twice_sum(x, z, y, w),
      twice_sum(x, y, z, w), one_minus(x, z), twice_diff(y, z, x, w),
      twice_diff(x, z, y, w), twice_sum(y, z, x, w), one_minus(x, y),
  });
}

Var euler_tape(Tape& t, Var r) {
  const Var a = t.cols(r, 0, 1), b = t.cols(r, 1, 1), g = t.cols(r, 2, 1);
  const Var ca = t.cos(a), sa = t.sin(a), cb = t.cos(b), sb = t.sin(b), cg = t.cos(g), sg = t.sin(g);
  return t.concat_cols({
      t.mul(ca, cb), t.sub(t.mul(t.mul(ca, sb), sg), t.mul(sa, cg)), t.add(t.mul(t.mul(ca, sb), cg), t.mul(sa, sg)),
      t.mul(sa, cb), t.add(t.mul(t.mul(sa, sb), sg), t.mul(ca, cg)), t.sub(t.mul(t.mul(sa, sb), cg), t.mul(ca, sg)),
      t.scale(sb, -1.0), t.mul(cb, sg), t.mul(cb, cg),
  });
}

}  // namespace

Var decoder_forward(Tape& t, const RepresentationKind& kind, Var r) {
  const std::size_t dim = kind.dimension();
  if (static_cast<std::size_t>(t.value(r).cols()) != dim) {
    std::ostringstream msg;
    msg << kind.name() << " decoder expects " << dim << " columns, got " << t.value(r).cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  const std::size_t n = kind.n;

  switch (kind.tag) {
    case ReprTag::TwoD: {
      const Var cs = t.normalize_rows(r, kUnitEps, ErrorKind::NearZeroInput);
      const Var c = t.cols(cs, 0, 1), s = t.cols(cs, 1, 1);
      return t.concat_cols({c, t.scale(s, -1.0), s, c});
    }
    case ReprTag::GramSchmidt:
      return gram_schmidt_tape(t, split_columns(t, r, n, n - 1), n);
    case ReprTag::RawMatrix: {
      std::vector<Var> a;
      for (std::size_t c = 0; c + 1 < n; ++c) {
        std::vector<int> index(n);
        for (std::size_t i = 0; i < n; ++i) index[i] = static_cast<int>(i * n + c);
        a.push_back(t.gather_cols(r, std::move(index)));
      }
      return gram_schmidt_tape(t, a, n);
    }
    case ReprTag::Projected: {
      if (kind.k == 1) {
        const std::size_t keep = n * n - 2 * n - 1;
        const Unprojected q = unproject_tape(t, t.cols(r, keep, n));
        const Var gamma = t.concat_cols({t.cols(r, 0, keep), q.first, q.rest});
        return gram_schmidt_tape(t, split_columns(t, gamma, n, n - 1), n);
      }
      const std::size_t k = kind.k;
      std::vector<Var> firsts(k + 1), rests(k + 1);
      std::size_t pos = n - k;
      for (std::size_t i = 1; i <= k; ++i, pos += n) {
        const Unprojected q = unproject_tape(t, t.cols(r, pos, n));
        firsts[i] = q.first;
        rests[i] = q.rest;
      }
      // Column 1: stored head rows 1…n−k, then rows n−k+1…n from projections k…1.
      std::vector<Var> col0_parts{t.cols(r, 0, n - k)};
      for (std::size_t i = k; i >= 1; --i) col0_parts.push_back(firsts[i]);
      std::vector<Var> a{t.concat_cols(col0_parts)};
      for (std::size_t i = 1; i <= k; ++i) a.push_back(rests[i]);
      for (std::size_t c = k + 1; c + 1 < n; ++c, pos += n) a.push_back(t.cols(r, pos, n));
      return gram_schmidt_tape(t, a, n);
    }
    case ReprTag::Quaternion:
    case ReprTag::UnitQuaternion:
    case ReprTag::HemiQuaternion:
      return quaternion_tape(t, r);
    case ReprTag::AxisAngle: {
      const Var axis = t.normalize_rows(t.cols(r, 0, 3), kUnitEps, ErrorKind::NearZeroAxis);
      return rodrigues_tape(t, axis, t.cols(r, 3, 1));
    }
    case ReprTag::Rodriguez: {
      const Var theta = t.sqrt(t.dot_rows(r, r));
      const Var axis = t.normalize_rows(r, kUnitEps, ErrorKind::DegenerateInput);
      return rodrigues_tape(t, axis, theta);
    }
    case ReprTag::Euler:
      return euler_tape(t, r);
    case ReprTag::Orthogonal:
    case ReprTag::Similarity:
      break;
  }
  throw Error(ErrorKind::InvalidKind, kind.name() + " has no differentiable SO(n) decoder");
}

Var loss_l2(Tape& t, Var pred, Var truth) {
  const Var diff = t.sub(pred, truth);
  const double batch = static_cast<double>(t.value(pred).rows());
  return t.scale(t.sum_all(t.mul(diff, diff)), 1.0 / batch);
}

Var loss_geodesic(Tape& t, Var pred, Var truth, double margin) {
  const Var trace = t.dot_rows(pred, truth);
  const Var cosine = t.scale(t.add_scalar(trace, -1.0), 0.5);
  const Var angle = t.acos_clamped(cosine, -1.0 + margin, 1.0 - margin);
  const double batch = static_cast<double>(t.value(pred).rows());
  return t.scale(t.sum_all(angle), 1.0 / batch);
}

std::string_view to_string(LossKind loss) { return loss == LossKind::L2 ? "l2" : "geodesic"; }

LossKind parse_loss(std::string_view name) {
  if (name == "l2") return LossKind::L2;
  if (name == "geodesic") return LossKind::Geodesic;
  throw Error(ErrorKind::ConfigError, "unknown loss '" + std::string(name) + "' (expected l2 or geodesic)");
}

Var loss(Tape& t, LossKind kind, Var pred, Var truth) {
  return kind == LossKind::L2 ? loss_l2(t, pred, truth) : loss_geodesic(t, pred, truth);
}

Tensor pack_rotations(const std::vector<RotationMatrix>& rotations) {
  if (rotations.empty()) return Tensor(0, 0);
  const std::size_t n = rotations.front().n();
  Tensor out(static_cast<Eigen::Index>(rotations.size()), static_cast<Eigen::Index>(n * n));
  for (std::size_t b = 0; b < rotations.size(); ++b) {
    const auto data = rotations[b].matrix().data();
    for (std::size_t j = 0; j < n * n; ++j) out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = data[j];
  }
  return out;
}

}  // namespace rotrep::ad
