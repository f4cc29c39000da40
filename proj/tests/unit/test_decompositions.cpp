#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "macgan/decompositions.hpp"

using namespace macgan;

namespace {

// U diag(sigma) V^T with random orthonormal factors.
Matrix constructed(std::size_t m, std::size_t n, const std::vector<double>& sigma, Rng& rng) {
  Matrix u = oracle::orthonormal_columns(m, sigma.size(), rng);
  const Matrix v = oracle::orthonormal_columns(n, sigma.size(), rng);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < sigma.size(); ++k) u(r, k) *= sigma[k];
  }
  return oracle::naive_matmul(u, v.transposed());
}

}  // namespace

TEST_CASE("svd_values recovers constructed spectra") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 5 + rng.below(30), n = 5 + rng.below(30);
    const std::size_t k = std::min(m, n);
    std::vector<double> sigma(k);
    for (double& s : sigma) s = std::exp(rng.uniform(-3.0, 3.0));
    std::sort(sigma.rbegin(), sigma.rend());
    const auto got = svd_values(constructed(m, n, sigma, rng));
    REQUIRE(got.size() == k);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(got[i] - sigma[i]) / sigma[i] < 1e-10);
  }
}

TEST_CASE("svd_values of a rank-5 product: trailing values negligible") {
  Rng rng(2);
  const auto got = svd_values(constructed(40, 30, {5, 4, 3, 2, 1}, rng));
  REQUIRE(got.size() == 30);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(got[i] - (5.0 - i)) < 1e-12 * 5);
  for (std::size_t i = 5; i < got.size(); ++i) CHECK(got[i] < 1e-10 * got[0]);
}

TEST_CASE("svd_values is transpose invariant and non-increasing") {
  Rng rng(3);
  const Matrix a = random_normal(17, 9, rng);
  const auto s = svd_values(a);
  const auto st = svd_values(a.transposed());
  REQUIRE(s.size() == st.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - st[i]) <= 1e-10 * s[0]);
  CHECK(std::is_sorted(s.rbegin(), s.rend()));
}

TEST_CASE("svd_values squares match Gram eigenvalues") {
  Rng rng(4);
  const Matrix a = random_normal(12, 7, rng);
  auto ev = oracle::symmetric_eigenvalues(oracle::naive_matmul(a.transposed(), a));
  std::sort(ev.rbegin(), ev.rend());
  const auto s = svd_values(a);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] * s[i] == doctest::Approx(ev[i]).epsilon(1e-10));
}

TEST_CASE("svd_values edge cases") {
  CHECK(svd_values(Matrix(3, 4)) == std::vector<double>(3, 0.0));
  CHECK(svd_values(Matrix::from_rows({{-3}})) == std::vector<double>{3.0});
  CHECK_THROWS_AS(svd_values(Matrix()), DimensionError);
  Matrix bad(2, 2, 1.0);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(svd_values(bad), NumericalError);
}

TEST_CASE("cholesky reconstructs and solves") {
  Rng rng(5);
  const Matrix z = random_normal(6, 10, rng);
  Matrix a = oracle::naive_matmul(z, z.transposed());
  for (std::size_t i = 0; i < 6; ++i) a(i, i) += 0.5;
  const Matrix l = cholesky(a);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) CHECK(l(i, j) == 0.0);
  }
  CHECK(oracle::relative_error(oracle::naive_matmul(l, l.transposed()), a) < 1e-14);
  const Matrix b = random_normal(6, 3, rng);
  const Matrix x = cholesky_solve(l, b);
  CHECK(oracle::relative_error(oracle::naive_matmul(a, x), b) < 1e-12);
  CHECK(logdet_posdef(a) == doctest::Approx(oracle::logdet_by_eigen(a)).epsilon(1e-12));
}

TEST_CASE("cholesky rejects indefinite input") {
  CHECK_THROWS_AS(cholesky(Matrix::from_rows({{1, 2}, {2, 1}})), NumericalError);
  CHECK_THROWS_AS(cholesky(Matrix(2, 3)), DimensionError);
  CHECK(logdet_posdef(Matrix::from_rows({{2, 0}, {0, 3}})) == doctest::Approx(std::log(6.0)));
}
