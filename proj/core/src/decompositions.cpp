#include "macgan/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Core>

namespace macgan {

namespace {
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;
}  // namespace

std::vector<double> svd_values(const Matrix& a) {
  if (a.empty()) throw DimensionError("svd_values: empty matrix");
  if (!a.all_finite()) throw NumericalError("svd_values: non-finite input");

  // Rows of `work` are the columns being orthogonalized. Pick the orientation
  // with fewer, longer vectors.
  Matrix work = a.rows() >= a.cols() ? a.transposed() : a;
  const std::size_t n = work.rows();
  const std::size_t m = work.cols();
  const double tol = static_cast<double>(std::max<std::size_t>(m, 1)) *
                     std::numeric_limits<double>::epsilon();
  const std::size_t max_sweeps = 100 * n;

  bool converged = n == 1;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto ap = work.row(p);
        auto aq = work.row(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += ap[k] * ap[k];
          beta += aq[k] * aq[k];
          gamma += ap[k] * aq[k];
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double x = ap[k];
          const double y = aq[k];
          ap[k] = c * x - s * y;
          aq[k] = s * x + c * y;
        }
        rotated = true;
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw NumericalError("svd_values: Jacobi sweeps did not converge within " +
                         std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double v : work.row(i)) sq += v * v;
    sigma[i] = std::sqrt(sq);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

Matrix cholesky(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("cholesky: non-square input");
  const std::size_t n = a.rows();
  Matrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw NumericalError("cholesky: matrix is not positive definite (pivot " +
                           std::to_string(j) + " = " + std::to_string(diag) + ")");
    }
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / ljj;
    }
  }
  return lower;
}

double logdet_posdef(const Matrix& a) {
  const Matrix lower = cholesky(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < lower.rows(); ++i) sum += std::log(lower(i, i));
  return 2.0 * sum;
}

Matrix cholesky_solve(const Matrix& lower, const Matrix& b) {
  const std::size_t n = lower.rows();
  if (!lower.is_square() || b.rows() != n) {
    throw DimensionError("cholesky_solve: factor and right-hand side disagree");
  }
  Matrix x = b;
  if (x.empty()) return x;
  const auto rows = static_cast<Eigen::Index>(n);
  const ConstMap l(lower.data(), rows, rows);
  MutMap xm(x.data(), rows, static_cast<Eigen::Index>(x.cols()));
  l.triangularView<Eigen::Lower>().solveInPlace(xm);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(xm);
  return x;
}

}  // namespace macgan
