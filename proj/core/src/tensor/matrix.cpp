#include "otc/tensor/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "otc/error.hpp"

namespace otc {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionError("ragged matrix literal: rows of length " + std::to_string(cols_) +
                           " and " + std::to_string(r.size()));
    }
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("matrix of shape (" + std::to_string(rows) + "×" + std::to_string(cols) +
                         ") given " + std::to_string(values_.size()) + " values");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return {values.size(), 1, std::vector<double>(values.begin(), values.end())};
}

Matrix Matrix::row(std::span<const double> values) {
  return {1, values.size(), std::vector<double>(values.begin(), values.end())};
}

double Matrix::scalar() const {
  if (!is_scalar()) throw DimensionError("expected a 1×1 matrix, got " + shape_string());
  return values_[0];
}

void Matrix::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool Matrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "×" + std::to_string(cols_) + ")";
}

namespace {

void require(bool ok, const char* op, const Matrix& a, const Matrix& b) {
  if (!ok) {
    throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " +
                         b.shape_string());
  }
}

}  // namespace

void multiply_add(const Matrix& a, const Matrix& b, Matrix& out, double scale) {
  require(a.cols() == b.rows(), "matmul", a, b);
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* o = &out(i, 0);
    for (std::size_t k = 0; k < inner; ++k) {
      const double s = scale * a(i, k);
      if (s == 0.0) continue;
      const double* br = b.row_span(k).data();
      for (std::size_t j = 0; j < m; ++j) o[j] += s * br[j];
    }
  }
}

void multiply_tn_add(const Matrix& a, const Matrix& b, Matrix& out, double scale) {
  require(a.rows() == b.rows(), "matmul_tn", a, b);
  const std::size_t inner = a.rows(), n = a.cols(), m = b.cols();
  for (std::size_t k = 0; k < inner; ++k) {
    const double* br = b.row_span(k).data();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = scale * a(k, i);
      if (s == 0.0) continue;
      double* o = &out(i, 0);
      for (std::size_t j = 0; j < m; ++j) o[j] += s * br[j];
    }
  }
}

void multiply_nt_add(const Matrix& a, const Matrix& b, Matrix& out, double scale) {
  require(a.cols() == b.cols(), "matmul_nt", a, b);
  const std::size_t n = a.rows(), m = b.rows(), inner = a.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ar = a.row_span(i).data();
    for (std::size_t j = 0; j < m; ++j) {
      const double* br = b.row_span(j).data();
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += ar[k] * br[k];
      out(i, j) += scale * acc;
    }
  }
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul", a, b);
  Matrix out(a.rows(), b.cols());
  multiply_add(a, b, out);
  return out;
}

Matrix multiply_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "matmul_tn", a, b);
  Matrix out(a.cols(), b.cols());
  multiply_tn_add(a, b, out);
  return out;
}

Matrix multiply_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "matmul_nt", a, b);
  Matrix out(a.rows(), b.rows());
  multiply_nt_add(a, b, out);
  return out;
}

Matrix transposed(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

void axpy(double alpha, const Matrix& x, Matrix& y) {
  require(x.same_shape(y), "axpy", x, y);
  auto xv = x.values();
  auto yv = y.values();
  for (std::size_t i = 0; i < xv.size(); ++i) yv[i] += alpha * xv[i];
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  require(a.same_shape(b), "max_abs_difference", a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace otc
