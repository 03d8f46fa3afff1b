#include "rotrep/tape.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rotrep::ad {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << op << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

void Tape::check(Var v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "variable does not belong to this tape");
  }
}

Var Tape::push(Node node) {
  for (int in : node.inputs) check(Var{in});
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Tape::leaf(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  check(a), check(b);
  require_same_shape(val(a), val(b), "add");
  Node n{Op::Add, {a.id, b.id}, val(a) + val(b)};
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  check(a), check(b);
  require_same_shape(val(a), val(b), "sub");
  Node n{Op::Sub, {a.id, b.id}, val(a) - val(b)};
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  check(a), check(b);
  require_same_shape(val(a), val(b), "mul");
  Node n{Op::Mul, {a.id, b.id}, val(a).cwiseProduct(val(b))};
  return push(std::move(n));
}

Var Tape::scale(Var a, double s) {
  check(a);
  Node n{Op::Scale, {a.id}, s * val(a)};
  n.p0 = s;
  return push(std::move(n));
}

Var Tape::add_scalar(Var a, double s) {
  check(a);
  Node n{Op::AddScalar, {a.id}, val(a).array() + s};
  n.p0 = s;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  check(a), check(b);
  if (val(a).cols() != val(b).rows()) throw Error(ErrorKind::DimensionMismatch, "matmul inner dimension");
  Node n{Op::MatMul, {a.id, b.id}, val(a) * val(b)};
  return push(std::move(n));
}

Var Tape::add_row(Var a, Var row) {
  check(a), check(row);
  if (val(row).rows() != 1 || val(row).cols() != val(a).cols()) {
    throw Error(ErrorKind::DimensionMismatch, "add_row expects a 1 x cols row");
  }
  Node n{Op::AddRow, {a.id, row.id}, val(a).rowwise() + val(row).row(0)};
  return push(std::move(n));
}

Var Tape::mul_col(Var a, Var col) {
  check(a), check(col);
  if (val(col).cols() != 1 || val(col).rows() != val(a).rows()) {
    throw Error(ErrorKind::DimensionMismatch, "mul_col expects a rows x 1 column");
  }
  Tensor out = val(a);
  for (Eigen::Index r = 0; r < out.rows(); ++r) out.row(r) *= val(col)(r, 0);
  Node n{Op::MulCol, {a.id, col.id}, std::move(out)};
  return push(std::move(n));
}

Var Tape::leaky_relu(Var a, double slope) {
  check(a);
  Node n{Op::LeakyRelu, {a.id}, val(a).unaryExpr([slope](double x) { return x >= 0.0 ? x : slope * x; })};
  n.p0 = slope;
  return push(std::move(n));
}

Var Tape::sqrt(Var a) {
  check(a);
  Node n{Op::Sqrt, {a.id}, val(a).array().sqrt()};
  return push(std::move(n));
}

Var Tape::reciprocal(Var a) {
  check(a);
  Node n{Op::Reciprocal, {a.id}, val(a).array().inverse()};
  return push(std::move(n));
}

Var Tape::sin(Var a) {
  check(a);
  Node n{Op::Sin, {a.id}, val(a).array().sin()};
  return push(std::move(n));
}

Var Tape::cos(Var a) {
  check(a);
  Node n{Op::Cos, {a.id}, val(a).array().cos()};
  return push(std::move(n));
}

Var Tape::acos_clamped(Var a, double lo, double hi) {
  check(a);
  const Tensor& x = val(a);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    min_acos_margin_ = std::min({min_acos_margin_, std::abs(x.data()[i] - lo), std::abs(hi - x.data()[i])});
  }
  Node n{Op::AcosClamped, {a.id}, val(a).unaryExpr([lo, hi](double x) { return std::acos(std::clamp(x, lo, hi)); })};
  n.p0 = lo;
  n.p1 = hi;
  return push(std::move(n));
}

Var Tape::dot_rows(Var a, Var b) {
  check(a), check(b);
  require_same_shape(val(a), val(b), "dot_rows");
  Node n{Op::DotRows, {a.id, b.id}, val(a).cwiseProduct(val(b)).rowwise().sum()};
  return push(std::move(n));
}

Var Tape::normalize_rows(Var a, double eps, ErrorKind on_fail) {
  check(a);
  const Tensor& x = val(a);
  Tensor norms = x.rowwise().norm();
  if (norms.size() > 0) min_norm_ = std::min(min_norm_, norms.minCoeff());
  for (Eigen::Index r = 0; r < norms.rows(); ++r) {
    if (!(norms(r, 0) > eps)) {
      std::ostringstream msg;
      msg << "row " << r << " has norm " << norms(r, 0) << " (threshold " << eps << ")";
      throw Error(on_fail, msg.str());
    }
  }
  Tensor out = x;
  for (Eigen::Index r = 0; r < out.rows(); ++r) out.row(r) /= norms(r, 0);
  Node n{Op::NormalizeRows, {a.id}, std::move(out), std::move(norms)};
  return push(std::move(n));
}

Var Tape::cross_rows(Var a, Var b) {
  check(a), check(b);
  require_same_shape(val(a), val(b), "cross_rows");
  if (val(a).cols() != 3) throw Error(ErrorKind::DimensionMismatch, "cross_rows needs 3 columns");
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  Tensor out(x.rows(), 3);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out(r, 0) = x(r, 1) * y(r, 2) - x(r, 2) * y(r, 1);
    out(r, 1) = x(r, 2) * y(r, 0) - x(r, 0) * y(r, 2);
    out(r, 2) = x(r, 0) * y(r, 1) - x(r, 1) * y(r, 0);
  }
  Node n{Op::CrossRows, {a.id, b.id}, std::move(out)};
  return push(std::move(n));
}

Var Tape::gather_cols(Var a, std::vector<int> index) {
  check(a);
  const Tensor& x = val(a);
  Tensor out(x.rows(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] < 0 || index[j] >= x.cols()) throw Error(ErrorKind::DimensionMismatch, "gather index out of range");
    out.col(static_cast<Eigen::Index>(j)) = x.col(index[j]);
  }
  Node n{Op::Gather, {a.id}, std::move(out)};
  n.index = std::move(index);
  return push(std::move(n));
}

Var Tape::cols(Var a, std::size_t start, std::size_t count) {
  std::vector<int> index(count);
  for (std::size_t j = 0; j < count; ++j) index[j] = static_cast<int>(start + j);
  return gather_cols(a, std::move(index));
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error(ErrorKind::DimensionMismatch, "concat of nothing");
  Eigen::Index rows = -1, total = 0;
  std::vector<int> inputs;
  for (Var p : parts) {
    check(p);
    if (rows < 0) rows = val(p).rows();
    if (val(p).rows() != rows) throw Error(ErrorKind::DimensionMismatch, "concat row mismatch");
    total += val(p).cols();
    inputs.push_back(p.id);
  }
  Tensor out(rows, total);
  Eigen::Index offset = 0;
  for (Var p : parts) {
    out.middleCols(offset, val(p).cols()) = val(p);
    offset += val(p).cols();
  }
  Node n{Op::Concat, std::move(inputs), std::move(out)};
  return push(std::move(n));
}

Var Tape::sum_all(Var a) {
  check(a);
  Tensor out(1, 1);
  out(0, 0) = val(a).sum();
  Node n{Op::SumAll, {a.id}, std::move(out)};
  return push(std::move(n));
}

const Tensor& Tape::grad(Var v) const {
  check(v);
  if (grads_.size() != nodes_.size()) throw Error(ErrorKind::DimensionMismatch, "backward has not been run");
  return grads_[static_cast<std::size_t>(v.id)];
}

void Tape::backward(Var loss) {
  check(loss);
  if (val(loss).rows() != 1 || val(loss).cols() != 1) throw Error(ErrorKind::DimensionMismatch, "loss must be 1x1");

  grads_.assign(nodes_.size(), Tensor());
  for (std::size_t i = 0; i < nodes_.size(); ++i) grads_[i] = Tensor::Zero(nodes_[i].value.rows(), nodes_[i].value.cols());
  grads_[static_cast<std::size_t>(loss.id)](0, 0) = 1.0;

  for (int i = loss.id; i >= 0; --i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    const Tensor& g = grads_[static_cast<std::size_t>(i)];
    if (n.op == Op::Leaf || g.isZero(0.0)) continue;
    auto ga = [&](std::size_t k) -> Tensor& { return grads_[static_cast<std::size_t>(n.inputs[k])]; };
    auto in = [&](std::size_t k) -> const Tensor& { return nodes_[static_cast<std::size_t>(n.inputs[k])].value; };

    switch (n.op) {
      case Op::Leaf:
        break;
      case Op::Add:
        ga(0) += g;
        ga(1) += g;
        break;
      case Op::Sub:
        ga(0) += g;
        ga(1) -= g;
        break;
      case Op::Mul:
        ga(0) += g.cwiseProduct(in(1));
        ga(1) += g.cwiseProduct(in(0));
        break;
      case Op::Scale:
        ga(0) += n.p0 * g;
        break;
      case Op::AddScalar:
        ga(0) += g;
        break;
      case Op::MatMul:
        ga(0) += g * in(1).transpose();
        ga(1) += in(0).transpose() * g;
        break;
      case Op::AddRow:
        ga(0) += g;
        ga(1) += g.colwise().sum();
        break;
      case Op::MulCol: {
        const Tensor& a = in(0);
        const Tensor& c = in(1);
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
          ga(0).row(r) += c(r, 0) * g.row(r);
          ga(1)(r, 0) += g.row(r).dot(a.row(r));
        }
        break;
      }
      case Op::LeakyRelu: {
        const double slope = n.p0;
        ga(0) += g.cwiseProduct(in(0).unaryExpr([slope](double x) { return x >= 0.0 ? 1.0 : slope; }));
        break;
      }
      case Op::Sqrt:
        ga(0).array() += g.array() / (2.0 * n.value.array());
        break;
      case Op::Reciprocal:
        ga(0).array() -= g.array() * n.value.array().square();
        break;
      case Op::Sin:
        ga(0).array() += g.array() * in(0).array().cos();
        break;
      case Op::Cos:
        ga(0).array() -= g.array() * in(0).array().sin();
        break;
      case Op::AcosClamped: {
        const double lo = n.p0, hi = n.p1;
        ga(0) += g.cwiseProduct(in(0).unaryExpr([lo, hi](double x) {
          return (x > lo && x < hi) ? -1.0 / std::sqrt(1.0 - x * x) : 0.0;
        }));
        break;
      }
      case Op::DotRows:
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
          ga(0).row(r) += g(r, 0) * in(1).row(r);
          ga(1).row(r) += g(r, 0) * in(0).row(r);
        }
        break;
      case Op::NormalizeRows: {
        const Tensor& y = n.value;
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
          const double gy = g.row(r).dot(y.row(r));
          ga(0).row(r) += (g.row(r) - gy * y.row(r)) / n.aux(r, 0);
        }
        break;
      }
      case Op::CrossRows: {
        // d/da (g·(a×b)) = b×g,  d/db = g×a
        const Tensor& a = in(0);
        const Tensor& b = in(1);
        Tensor& da = ga(0);
        Tensor& db = ga(1);
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
          da(r, 0) += b(r, 1) * g(r, 2) - b(r, 2) * g(r, 1);
          da(r, 1) += b(r, 2) * g(r, 0) - b(r, 0) * g(r, 2);
          da(r, 2) += b(r, 0) * g(r, 1) - b(r, 1) * g(r, 0);
          db(r, 0) += g(r, 1) * a(r, 2) - g(r, 2) * a(r, 1);
          db(r, 1) += g(r, 2) * a(r, 0) - g(r, 0) * a(r, 2);
          db(r, 2) += g(r, 0) * a(r, 1) - g(r, 1) * a(r, 0);
        }
        break;
      }
      case Op::Gather:
        for (std::size_t j = 0; j < n.index.size(); ++j) ga(0).col(n.index[j]) += g.col(static_cast<Eigen::Index>(j));
        break;
      case Op::Concat: {
        Eigen::Index offset = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) {
          const Eigen::Index w = in(k).cols();
          ga(k) += g.middleCols(offset, w);
          offset += w;
        }
        break;
      }
      case Op::SumAll:
        ga(0).array() += g(0, 0);
        break;
    }
  }
}

}  // namespace rotrep::ad
