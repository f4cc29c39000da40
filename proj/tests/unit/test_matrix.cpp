#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <limits>

#include "macgan/matrix.hpp"
#include "macgan/rng.hpp"

using namespace macgan;

TEST_CASE("matmul agrees with a plain triple loop") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 1 + rng.below(40), k = 1 + rng.below(40), n = 1 + rng.below(40);
    const Matrix a = random_normal(m, k, rng);
    const Matrix b = random_normal(k, n, rng);
    CHECK(oracle::relative_error(matmul(a, b), oracle::naive_matmul(a, b)) < 1e-14);
    const Matrix at = a.transposed();
    CHECK(oracle::relative_error(matmul_tn(at, b), oracle::naive_matmul(a, b)) < 1e-14);
    const Matrix bt = b.transposed();
    CHECK(oracle::relative_error(matmul_nt(a, bt), oracle::naive_matmul(a, b)) < 1e-14);
  }
}

TEST_CASE("matmul shape and value errors") {
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(matmul_tn(Matrix(2, 3), Matrix(3, 3)), DimensionError);
  CHECK_THROWS_AS(matmul_nt(Matrix(2, 3), Matrix(3, 2)), DimensionError);
  Matrix big(1, 2, std::numeric_limits<double>::max());
  CHECK_THROWS_AS(matmul(big, Matrix(2, 1, 10.0)), NumericalError);
}

TEST_CASE("identity, transpose and blocks") {
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(matmul(Matrix::identity(2), a) == a);
  CHECK(a.transposed().transposed() == a);
  CHECK(a.transposed()(2, 1) == 6);
  CHECK(a.col_block(1, 2) == Matrix::from_rows({{2, 3}, {5, 6}}));
  CHECK(a.block(1, 1, 0, 2) == Matrix::from_rows({{4, 5}}));
  Matrix b(3, 4);
  b.set_block(1, 2, Matrix::from_rows({{7, 8}, {9, 10}}));
  CHECK(b(2, 3) == 10);
  CHECK(b(0, 0) == 0);
  CHECK_THROWS_AS(b.set_block(2, 3, Matrix(2, 2)), DimensionError);
  CHECK_THROWS_AS(a.col_block(2, 2), DimensionError);
}

TEST_CASE("hcat and vcat") {
  const Matrix a = Matrix::from_rows({{1}, {2}});
  const Matrix b = Matrix::from_rows({{3, 4}, {5, 6}});
  CHECK(hcat(a, b) == Matrix::from_rows({{1, 3, 4}, {2, 5, 6}}));
  CHECK(vcat(b, Matrix::from_rows({{7, 8}})) == Matrix::from_rows({{3, 4}, {5, 6}, {7, 8}}));
  CHECK_THROWS_AS(hcat(a, Matrix(3, 1)), DimensionError);
  CHECK_THROWS_AS(vcat(a, b), DimensionError);
}

TEST_CASE("reductions") {
  const Matrix a = Matrix::from_rows({{1, -2}, {3, 4}});
  CHECK(trace(a) == 5);
  CHECK(frobenius_sq(a) == 30);
  CHECK(frobenius_dot(a, a) == 30);
  CHECK(max_abs(a) == 4);
  CHECK_THROWS_AS(trace(Matrix(2, 3)), DimensionError);
}

TEST_CASE("elementwise arithmetic") {
  Matrix a = Matrix::from_rows({{1, 2}});
  const Matrix b = Matrix::from_rows({{3, 5}});
  CHECK(a + b == Matrix::from_rows({{4, 7}}));
  CHECK(b - a == Matrix::from_rows({{2, 3}}));
  CHECK(a * 2.0 == Matrix::from_rows({{2, 4}}));
  a.add_scaled(b, -1.0);
  CHECK(a == Matrix::from_rows({{-2, -3}}));
  CHECK_THROWS_AS(a += Matrix(2, 1), DimensionError);
  a(0, 0) = std::nan("");
  CHECK_FALSE(a.all_finite());
}
