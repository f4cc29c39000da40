#pragma once

#include <vector>

#include "macgan/matrix.hpp"

namespace macgan {

/// Singular values of `a`, non-increasing, length min(rows, cols).
///
/// One-sided (Hestenes) Jacobi on the columns of whichever orientation has
/// fewer columns. A column pair is rotated while |<a_p, a_q>| exceeds
/// rows * 2^-52 * ||a_p|| ||a_q||; the sweep loop ends after a sweep without
/// rotations, which leaves the off-diagonal mass of the Gram matrix far below
/// 1e-12 of its Frobenius norm. Small singular values keep high relative
/// accuracy, unlike eigen-decomposition of the Gram matrix.
///
/// Throws DimensionError for an empty matrix, NumericalError for non-finite
/// input or when 100 * min(rows, cols) sweeps do not converge.
std::vector<double> svd_values(const Matrix& a);

/// Lower-triangular Cholesky factor L with a = L L^T. Only the lower triangle
/// of `a` is read. Throws NumericalError on a non-positive pivot.
Matrix cholesky(const Matrix& a);

/// log det(a) for symmetric positive definite a via Cholesky.
double logdet_posdef(const Matrix& a);

/// Solves a x = b given the Cholesky factor of a.
Matrix cholesky_solve(const Matrix& lower, const Matrix& b);

}  // namespace macgan
