#pragma once

#include <array>
#include <vector>

#include "rotrep/matrix.hpp"

namespace rotrep {

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are sorted descending; `vectors` holds matching columns.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& sym);

/// Mean-centered points projected onto the two leading principal directions.
/// Each direction's largest-magnitude entry is made positive.
std::vector<std::array<double, 2>> pca_top2(const std::vector<Vector>& points);

}  // namespace rotrep
