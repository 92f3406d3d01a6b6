#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "otc/graph/sparse_matrix.hpp"
#include "otc/tensor/tape.hpp"

namespace otc {

/// Scoring direction W_α (d×1) of one coarsening level.
struct ScoringParams {
  Var weight;
};

/// One application of the coarsening operator to a graph with n nodes.
struct CoarseningLevel {
  /// Coarse nodes by descending score; entry j is the fine-level index of
  /// coarse node j.
  std::vector<std::size_t> selected;
  /// n×1 node scores α.
  Var alpha;
  /// n×m coarsening matrix S.
  Var coarsening;
  /// m×m coarse adjacency SᵀAS, differentiable.
  Var coarse_adjacency;
  /// Same coarse adjacency with its structural sparsity pattern.
  SparseMatrix coarse_structure;

  std::size_t size() const { return selected.size(); }
};

/// max(1, ⌈ratio·n⌉).
std::size_t coarse_node_count(std::size_t n, double ratio);

/// α = sigmoid((ÂXW_α)²).
Var node_scores(Var normalized_adjacency, Var features, const ScoringParams& params);

/// Indices of the m largest scores in descending order, ties to the lower
/// index. Selection is not differentiated.
std::vector<std::size_t> select_coarse_nodes(const Matrix& alpha, std::size_t m);

/// S = ℓ1-row-normalize[Â_s ⊙ (1·α_sᵀ)] where Â_s and α_s gather the selected
/// columns/entries in selection order. Rows without a selected neighbor are
/// zero.
Var build_coarsening_matrix(Var normalized_adjacency, Var alpha,
                            std::span<const std::size_t> selected);

/// A_c = SᵀAS on dense values.
Var galerkin_coarsen(Var adjacency, Var coarsening);

/// A_c = SᵀAS accumulated over the structural nonzeros of A and S.
SparseMatrix galerkin_coarsen(const SparseMatrix& adjacency, const Matrix& coarsening);

/// χ(j): rows of S with a nonzero in column j.
std::vector<std::size_t> aggregation_set(const Matrix& coarsening, std::size_t j);

/// Full coarsening step: scores, selection, S and A_c. `structure` must hold
/// the same adjacency as `adjacency` with its structural pattern.
CoarseningLevel coarsen(Var adjacency, const SparseMatrix& structure, Var normalized_adjacency,
                        Var features, const ScoringParams& params, double ratio);

// Structural oracles.

struct AggregationViolation {
  std::size_t coarse_row = 0;
  std::size_t coarse_col = 0;
  bool coarse_edge = false;
  bool sets_connected = false;
};

/// Checks that A_c(j,j′) is structurally nonzero exactly when some edge
/// (self-loops included) joins χ(j) and χ(j′) in A. Returns the pairs where
/// the two disagree.
std::vector<AggregationViolation> check_aggregation_connectivity(const SparseMatrix& adjacency,
                                                 const Matrix& coarsening,
                                                 const SparseMatrix& coarse_adjacency);

struct HopViolation {
  std::size_t coarse_row = 0;
  std::size_t coarse_col = 0;
  std::size_t hops = 0;
};

/// Coarse edges whose endpoints lie more than `max_hops` apart in the fine
/// graph (BFS hop distance between the selected fine nodes).
std::vector<HopViolation> check_hop_bound(const SparseMatrix& adjacency,
                                          std::span<const std::size_t> selected,
                                          const SparseMatrix& coarse_adjacency,
                                          std::size_t max_hops = 3);

}  // namespace otc
