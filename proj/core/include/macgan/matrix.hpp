#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "macgan/error.hpp"

namespace macgan {

/// Dense row-major matrix of doubles.
///
/// Features are stored column-per-sample (d x n), network weights as
/// out x in, relation matrices as n x n.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }

  Matrix transposed() const;
  // Columns [first, first + count).
  Matrix col_block(std::size_t first, std::size_t count) const;
  // Rows [first, first + count) x columns [first_col, first_col + count_cols).
  Matrix block(std::size_t first_row, std::size_t count_rows, std::size_t first_col,
               std::size_t count_cols) const;
  void set_block(std::size_t first_row, std::size_t first_col, const Matrix& src);

  void fill(double value) noexcept;
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s) noexcept;
  // this += s * other
  Matrix& add_scaled(const Matrix& other, double s);

  friend bool operator==(const Matrix& a, const Matrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

/// a * b. Throws DimensionError when a.cols() != b.rows() and NumericalError
/// when the product contains non-finite entries.
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T * b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a * b^T without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// Column-wise concatenation [a | b].
Matrix hcat(const Matrix& a, const Matrix& b);
/// Row-wise concatenation [a ; b].
Matrix vcat(const Matrix& a, const Matrix& b);

/// Sum of the diagonal. Throws DimensionError for non-square input.
double trace(const Matrix& a);
/// Sum of squared entries, i.e. trace(a a^T).
double frobenius_sq(const Matrix& a) noexcept;
/// Sum over i, j of a(i,j) * b(i,j).
double frobenius_dot(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a) noexcept;

}  // namespace macgan
