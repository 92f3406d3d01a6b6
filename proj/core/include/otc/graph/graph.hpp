#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "otc/graph/sparse_matrix.hpp"
#include "otc/tensor/tape.hpp"

namespace otc {

/// Undirected weighted graph with node features and an optional class label.
/// Self-loops are allowed.
class Graph {
 public:
  Graph() = default;
  /// Validates symmetry (1e-12), nonnegative weights and the feature row count.
  Graph(SparseMatrix adjacency, Matrix features, std::optional<int> label = std::nullopt);

  std::size_t num_nodes() const { return adjacency_.rows(); }
  std::size_t feature_dim() const { return features_.cols(); }
  const SparseMatrix& adjacency() const { return adjacency_; }
  const Matrix& features() const { return features_; }
  const std::optional<int>& label() const { return label_; }

  Graph without_label() const;

 private:
  SparseMatrix adjacency_;
  Matrix features_;
  std::optional<int> label_;
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// D̃^{-1/2}(A + I)D̃^{-1/2} with D̃ = diag((A + I)·1), weighted degrees.
SparseMatrix normalized_adjacency(const SparseMatrix& adjacency);
inline SparseMatrix normalized_adjacency(const Graph& g) {
  return normalized_adjacency(g.adjacency());
}

/// Differentiable variant on a dense n×n adjacency value. The result has the
/// sparsity pattern of A + I.
Var normalized_adjacency(Var adjacency);

/// 1ᵀA1, self-loops counted once per stored entry.
double total_edge_weight(const SparseMatrix& a);

/// Hop distances from `source`; kUnreachable marks other components.
std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source);
std::vector<std::size_t> bfs_distances(const SparseMatrix& adjacency, std::size_t source);

/// Relabels node i as perm[i]. Throws ContractError unless perm is a bijection.
Graph permute(const Graph& g, std::span<const std::size_t> perm);

}  // namespace otc
