#pragma once

#include <vector>

#include "semsub/matrix.hpp"

namespace semsub {

// Thin singular value decomposition a = u * diag(singular_values) * vt with
// r = min(rows, cols) factors. u has orthonormal columns, vt orthonormal
// rows, singular values are sorted non-increasing. Tiny singular values are
// reported as computed (never truncated); when a value underflows to zero
// the matching column of u is completed deterministically so u always has
// full orthonormal width.
struct ThinSvd {
  Matrix u;
  std::vector<double> singular_values;
  Matrix vt;
};

// One-sided Jacobi SVD. Works on the smaller dimension (the input is
// transposed first when it is wide), orthogonalizing column pairs until
// every off-diagonal Gram entry is negligible. Deterministic: fixed sweep
// order, stable ordering of equal singular values, and a sign convention
// that makes the largest-magnitude entry of each u column positive (ties
// broken by lowest row index).
ThinSvd thin_svd(const Matrix& a);

// Leading k factors of thin_svd(a); requires 1 <= k <= min(rows, cols).
ThinSvd truncated_svd(const Matrix& a, std::size_t k);

}  // namespace semsub
