#pragma once

#include <cstddef>
#include <vector>

#include "otc/tensor/matrix.hpp"

namespace otc {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double weight = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Coordinate-format sparse matrix with unique, nonzero entries kept sorted in
/// row-major order.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  /// Zero weights are dropped. Throws ContractError on duplicate coordinates
  /// and IndexError on out-of-range ones.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries);
  /// Keeps every nonzero entry of `dense`.
  static SparseMatrix from_dense(const Matrix& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Triplet>& entries() const { return entries_; }

  /// Weight at (r, c), zero when absent.
  double at(std::size_t r, std::size_t c) const;
  bool contains(std::size_t r, std::size_t c) const;

  Matrix to_dense() const;
  SparseMatrix transpose() const;
  /// Largest |A(i,j) − A(j,i)|.
  double asymmetry() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
};

}  // namespace otc
