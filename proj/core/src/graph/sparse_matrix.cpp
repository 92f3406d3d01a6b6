#include "otc/graph/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otc/error.hpp"

namespace otc {
namespace {

bool coordinate_less(const Triplet& a, const Triplet& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
  SparseMatrix m(rows, cols);
  std::erase_if(entries, [](const Triplet& t) { return t.weight == 0.0; });
  std::sort(entries.begin(), entries.end(), coordinate_less);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Triplet& t = entries[i];
    if (t.row >= rows || t.col >= cols) {
      throw IndexError("sparse entry (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                       ") outside a " + std::to_string(rows) + "×" + std::to_string(cols) +
                       " matrix");
    }
    if (i > 0 && entries[i - 1].row == t.row && entries[i - 1].col == t.col) {
      throw ContractError("duplicate sparse entry (" + std::to_string(t.row) + "," +
                          std::to_string(t.col) + ")");
    }
  }
  m.entries_ = std::move(entries);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& dense) {
  SparseMatrix m(dense.rows(), dense.cols());
  for (std::size_t i = 0; i < dense.rows(); ++i)
    for (std::size_t j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0) m.entries_.push_back({i, j, dense(i, j)});
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const Triplet key{r, c, 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, coordinate_less);
  return it != entries_.end() && it->row == r && it->col == c ? it->weight : 0.0;
}

bool SparseMatrix::contains(std::size_t r, std::size_t c) const {
  const Triplet key{r, c, 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, coordinate_less);
  return it != entries_.end() && it->row == r && it->col == c;
}

Matrix SparseMatrix::to_dense() const {
  Matrix d(rows_, cols_);
  for (const Triplet& t : entries_) d(t.row, t.col) = t.weight;
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> flipped;
  flipped.reserve(entries_.size());
  for (const Triplet& t : entries_) flipped.push_back({t.col, t.row, t.weight});
  return from_triplets(cols_, rows_, std::move(flipped));
}

double SparseMatrix::asymmetry() const {
  if (rows_ != cols_) return INFINITY;
  double worst = 0.0;
  for (const Triplet& t : entries_) worst = std::max(worst, std::abs(t.weight - at(t.col, t.row)));
  return worst;
}

}  // namespace otc
