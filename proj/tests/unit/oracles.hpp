#pragma once

// Reference computations used as test oracles. They avoid the library code
// paths they check: plain loops instead of the optimized kernels, central
// differences instead of analytic gradients.

#include <functional>

#include "macgan/matrix.hpp"
#include "macgan/rng.hpp"

namespace oracle {

using macgan::Matrix;

Matrix naive_matmul(const Matrix& a, const Matrix& b);

/// Central differences of f with respect to every entry of x (restored after).
Matrix numeric_gradient(Matrix& x, const std::function<double()>& f, double h = 1e-5);

/// ||a - b||_F / max(||a||_F, ||b||_F, floor)
double relative_error(const Matrix& a, const Matrix& b, double floor = 1e-8);

/// Orthonormal columns by classical Gram-Schmidt applied twice.
Matrix orthonormal_columns(std::size_t m, std::size_t k, macgan::Rng& rng);

/// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi, ascending.
std::vector<double> symmetric_eigenvalues(Matrix a);

/// log det of a symmetric positive definite matrix from its Jacobi eigenvalues.
double logdet_by_eigen(const Matrix& a);

}  // namespace oracle
