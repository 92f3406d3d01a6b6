#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace otc {

/// Dense row-major matrix of doubles. Vectors are n×1 (column) or 1×n (row)
/// matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols, 0.0}; }
  static Matrix ones(std::size_t rows, std::size_t cols) { return {rows, cols, 1.0}; }
  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> values);
  static Matrix row(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> row_span(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row_span(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  double scalar() const;
  void fill(double v);
  bool all_finite() const;

  /// "(r×c)", used in error messages.
  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Non-differentiable kernels shared by the reverse-mode operations.

Matrix multiply(const Matrix& a, const Matrix& b);
/// aᵀ·b
Matrix multiply_tn(const Matrix& a, const Matrix& b);
/// a·bᵀ
Matrix multiply_nt(const Matrix& a, const Matrix& b);
Matrix transposed(const Matrix& a);

/// out += scale · a·b, out += scale · aᵀ·b, out += scale · a·bᵀ
void multiply_add(const Matrix& a, const Matrix& b, Matrix& out, double scale = 1.0);
void multiply_tn_add(const Matrix& a, const Matrix& b, Matrix& out, double scale = 1.0);
void multiply_nt_add(const Matrix& a, const Matrix& b, Matrix& out, double scale = 1.0);

/// y += alpha·x
void axpy(double alpha, const Matrix& x, Matrix& y);

double max_abs_difference(const Matrix& a, const Matrix& b);

}  // namespace otc
