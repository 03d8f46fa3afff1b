#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "rotrep/error.hpp"

namespace rotrep::ad {

/// Batch-major values: one row per batch member.
using Tensor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Var {
  int id = -1;
};

/// Append-only reverse-mode tape over batched tensors. Every node's inputs
/// precede it, so a single reverse sweep produces exact gradients.
///
/// Row-wise primitives (dot, normalize, cross) treat each row as one vector,
/// which lets a whole batch share one tape.
class Tape {
 public:
  enum class Op {
    Leaf,
    Add,
    Sub,
    Mul,
    Scale,
    AddScalar,
    MatMul,
    AddRow,
    MulCol,
    LeakyRelu,
    Sqrt,
    Reciprocal,
    Sin,
    Cos,
    AcosClamped,
    DotRows,
    NormalizeRows,
    CrossRows,
    Gather,
    Concat,
    SumAll,
  };

  Var leaf(Tensor value);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  /// Elementwise product.
  Var mul(Var a, Var b);
  Var scale(Var a, double s);
  Var add_scalar(Var a, double s);
  Var matmul(Var a, Var b);
  /// a (B×k) + row (1×k) broadcast down the rows.
  Var add_row(Var a, Var row);
  /// a (B×k) scaled row-wise by col (B×1).
  Var mul_col(Var a, Var col);
  Var leaky_relu(Var a, double slope);
  Var sqrt(Var a);
  Var reciprocal(Var a);
  Var sin(Var a);
  Var cos(Var a);
  /// acos(clamp(x, lo, hi)); zero derivative where the clamp is active.
  Var acos_clamped(Var a, double lo, double hi);
  /// B×1 row-wise inner products.
  Var dot_rows(Var a, Var b);
  /// Row-wise a / ‖a‖. Throws Error(`on_fail`) when any row norm <= eps.
  Var normalize_rows(Var a, double eps, ErrorKind on_fail);
  /// Row-wise 3D cross product.
  Var cross_rows(Var a, Var b);
  /// Columns `index` of a, in order (repeats allowed).
  Var gather_cols(Var a, std::vector<int> index);
  Var cols(Var a, std::size_t start, std::size_t count);
  Var concat_cols(const std::vector<Var>& parts);
  /// 1×1 sum of every entry.
  Var sum_all(Var a);

  const Tensor& value(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).value; }
  /// Gradient of the last `backward` target with respect to `v`; zero tensor
  /// when `v` does not influence it.
  const Tensor& grad(Var v) const;

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse. `loss` must be 1×1.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  /// Smallest row norm seen by normalize_rows (distance to its domain edge).
  double smallest_normalized_norm() const noexcept { return min_norm_; }
  /// Smallest distance of an acos_clamped input to either clamp bound.
  double smallest_acos_margin() const noexcept { return min_acos_margin_; }
  Op op(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).op; }

 private:
  struct Node {
    Op op = Op::Leaf;
    std::vector<int> inputs;
    Tensor value;
    Tensor aux;  // cached per-op data (row norms, masks)
    double p0 = 0.0;
    double p1 = 0.0;
    std::vector<int> index;
  };

  Var push(Node node);
  const Tensor& val(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].value; }
  void check(Var v) const;

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
  double min_norm_ = std::numeric_limits<double>::infinity();
  double min_acos_margin_ = std::numeric_limits<double>::infinity();
};

}  // namespace rotrep::ad
