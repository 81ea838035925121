#include "semsub/matrix.hpp"

#include <cmath>
#include <sstream>

#include "semsub/errors.hpp"

namespace semsub {

namespace {

[[noreturn]] void throw_shape(const char* op, const Matrix& a, const Matrix& b) {
  std::ostringstream msg;
  msg << op << ": incompatible shapes " << a.rows() << "x" << a.cols() << " and " << b.rows()
      << "x" << b.cols();
  throw DimensionError(msg.str());
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw_shape(op, a, b);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw DimensionError("Matrix: dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) throw DimensionError("Matrix: dimensions must be positive");
  if (data_.size() != rows * cols) {
    std::ostringstream msg;
    msg << "Matrix: data length " << data_.size() << " does not equal " << rows << "x" << cols;
    throw DimensionError(msg.str());
  }
  if (!all_finite()) throw ValueError("Matrix: non-finite entry rejected");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) throw DimensionError("Matrix: dimensions must be positive");
  const std::size_t cols = rows.begin()->size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionError("Matrix: ragged row list");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + j];
  return out;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  for (std::size_t i = 0; i < rows_; ++i) data_[i * cols_ + j] = values[i];
}

bool Matrix::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw_shape("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  // i-l-j loop order is cache friendly on row-major storage and feeds each
  // output entry its terms in the same left-to-right order as the naive
  // triple loop, keeping results bit-identical to it.
  const std::size_t n = b.cols();
  double* out_data = out.data().data();
  const double* a_data = a.data().data();
  const double* b_data = b.data().data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out_row = out_data + i * n;
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a_data[i * a.cols() + l];
      const double* b_row = b_data + l * n;
      for (std::size_t j = 0; j < n; ++j) out_row[j] += ail * b_row[j];
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape("add", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape("subtract", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
  return out;
}

double frobenius_norm_sq(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return sum;
}

double entrywise_dot(const Matrix& a, const Matrix& b) {
  require_same_shape("entrywise_dot", a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.data()[i] * b.data()[i];
  return sum;
}

double min_entry(const Matrix& a) {
  double m = a.data()[0];
  for (double v : a.data()) m = std::min(m, v);
  return m;
}

double max_abs_entry(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double column_norm(const Matrix& a, std::size_t j) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

double ortho_residual(const Matrix& w) {
  const std::size_t k = w.cols();
  double sum = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) {
      double g = 0.0;
      for (std::size_t i = 0; i < w.rows(); ++i) g += w(i, p) * w(i, q);
      const double d = g - (p == q ? 1.0 : 0.0);
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace semsub
