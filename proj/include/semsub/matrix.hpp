#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace semsub {

// Dense row-major matrix of 64-bit reals. Constructors taking data reject
// NaN/Inf, so a Matrix in the wild always holds finite entries. All kernels
// below are pure functions over immutable inputs and are safe to call from
// multiple threads.
class Matrix {
 public:
  // Zero-filled rows x cols matrix. Both dimensions must be positive.
  Matrix(std::size_t rows, std::size_t cols);

  // Takes ownership of `data` (row-major, length rows*cols, finite).
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  bool all_finite() const noexcept;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Matrix identity(std::size_t n);
Matrix transpose(const Matrix& a);

// Standard product. Each output entry accumulates its inner products in
// fixed left-to-right order, so results are bit-reproducible.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

// Sum of squared entries.
double frobenius_norm_sq(const Matrix& a);

// trace(a^T b) computed entrywise; requires equal shapes.
double entrywise_dot(const Matrix& a, const Matrix& b);

double min_entry(const Matrix& a);
double max_abs_entry(const Matrix& a);
double column_norm(const Matrix& a, std::size_t j);

// ‖w^T w − I‖_F, the orthonormality residual of w's columns.
double ortho_residual(const Matrix& w);

}  // namespace semsub
