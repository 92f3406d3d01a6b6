#include "otc/coarsen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "otc/error.hpp"
#include "otc/graph/graph.hpp"
#include "otc/tensor/ops.hpp"

namespace otc {

std::size_t coarse_node_count(std::size_t n, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ContractError("coarsening ratio must lie in (0, 1], got " + std::to_string(ratio));
  }
  const auto m = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n)));
  return std::max<std::size_t>(1, std::min(m, std::max<std::size_t>(n, 1)));
}

Var node_scores(Var normalized_adjacency, Var features, const ScoringParams& params) {
  if (features.cols() != params.weight.rows() || params.weight.cols() != 1) {
    throw DimensionError("node_scores: features " + features.value().shape_string() +
                         " incompatible with scoring weight " +
                         params.weight.value().shape_string());
  }
  if (normalized_adjacency.cols() != features.rows()) {
    throw DimensionError("node_scores: adjacency " + normalized_adjacency.value().shape_string() +
                         " incompatible with features " + features.value().shape_string());
  }
  return sigmoid(square(matmul(normalized_adjacency, matmul(features, params.weight))));
}

std::vector<std::size_t> select_coarse_nodes(const Matrix& alpha, std::size_t m) {
  const std::size_t n = alpha.size();
  if (m < 1 || m > n) {
    throw ContractError("select_coarse_nodes: cannot pick " + std::to_string(m) + " of " +
                        std::to_string(n) + " nodes");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&alpha](std::size_t a, std::size_t b) { return alpha[a] > alpha[b]; });
  order.resize(m);
  return order;
}

Var build_coarsening_matrix(Var normalized_adjacency, Var alpha,
                            std::span<const std::size_t> selected) {
  const std::size_t n = normalized_adjacency.rows();
  if (alpha.rows() != n || alpha.cols() != 1) {
    throw DimensionError("build_coarsening_matrix: scores " + alpha.value().shape_string() +
                         " do not match adjacency " + normalized_adjacency.value().shape_string());
  }
  Tape& tape = normalized_adjacency.tape();
  Var picked = select_columns(normalized_adjacency, selected);
  Var picked_scores = select_rows(alpha, selected);
  Var overlay = matmul(tape.constant(Matrix::ones(n, 1)), transpose(picked_scores));
  return row_normalize_l1(mul(picked, overlay));
}

Var galerkin_coarsen(Var adjacency, Var coarsening) {
  if (adjacency.rows() != adjacency.cols() || adjacency.cols() != coarsening.rows()) {
    throw DimensionError("galerkin_coarsen: adjacency " + adjacency.value().shape_string() +
                         " incompatible with coarsening matrix " +
                         coarsening.value().shape_string());
  }
  return matmul(transpose(coarsening), matmul(adjacency, coarsening));
}

SparseMatrix galerkin_coarsen(const SparseMatrix& adjacency, const Matrix& coarsening) {
  const std::size_t n = adjacency.rows(), m = coarsening.cols();
  if (adjacency.cols() != n || coarsening.rows() != n) {
    throw DimensionError("galerkin_coarsen: adjacency " + std::to_string(n) + "×" +
                         std::to_string(adjacency.cols()) + " incompatible with coarsening matrix " +
                         coarsening.shape_string());
  }
  std::vector<std::vector<std::size_t>> row_support(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (coarsening(i, j) != 0.0) row_support[i].push_back(j);

  Matrix acc(m, m);
  std::vector<bool> present(m * m, false);
  for (const Triplet& t : adjacency.entries()) {
    for (std::size_t j : row_support[t.row]) {
      const double left = coarsening(t.row, j) * t.weight;
      for (std::size_t jp : row_support[t.col]) {
        acc(j, jp) += left * coarsening(t.col, jp);
        present[j * m + jp] = true;
      }
    }
  }
  std::vector<Triplet> entries;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t jp = 0; jp < m; ++jp)
      if (present[j * m + jp]) entries.push_back({j, jp, acc(j, jp)});
  return SparseMatrix::from_triplets(m, m, std::move(entries));
}

std::vector<std::size_t> aggregation_set(const Matrix& coarsening, std::size_t j) {
  if (j >= coarsening.cols()) {
    throw IndexError("aggregation_set: coarse node " + std::to_string(j) + " out of range for " +
                     std::to_string(coarsening.cols()) + " coarse nodes");
  }
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < coarsening.rows(); ++i)
    if (coarsening(i, j) != 0.0) members.push_back(i);
  return members;
}

CoarseningLevel coarsen(Var adjacency, const SparseMatrix& structure, Var normalized_adj,
                        Var features, const ScoringParams& params, double ratio) {
  const std::size_t n = adjacency.rows();
  if (structure.rows() != n) {
    throw DimensionError("coarsen: structural adjacency has " + std::to_string(structure.rows()) +
                         " nodes, dense adjacency " + std::to_string(n));
  }
  CoarseningLevel level;
  level.alpha = node_scores(normalized_adj, features, params);
  level.selected = select_coarse_nodes(level.alpha.value(), coarse_node_count(n, ratio));
  level.coarsening = build_coarsening_matrix(normalized_adj, level.alpha, level.selected);
  level.coarse_adjacency = galerkin_coarsen(adjacency, level.coarsening);
  level.coarse_structure = galerkin_coarsen(structure, level.coarsening.value());
  return level;
}

std::vector<AggregationViolation> check_aggregation_connectivity(const SparseMatrix& adjacency,
                                                 const Matrix& coarsening,
                                                 const SparseMatrix& coarse_adjacency) {
  const std::size_t m = coarsening.cols();
  if (coarse_adjacency.rows() != m || coarse_adjacency.cols() != m ||
      adjacency.rows() != coarsening.rows()) {
    throw DimensionError("check_aggregation_connectivity: inconsistent shapes");
  }
  std::vector<std::vector<std::size_t>> sets(m);
  for (std::size_t j = 0; j < m; ++j) sets[j] = aggregation_set(coarsening, j);

  std::vector<AggregationViolation> violations;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t jp = 0; jp < m; ++jp) {
      bool connected = false;
      for (std::size_t i : sets[j]) {
        for (std::size_t ip : sets[jp]) {
          if (adjacency.contains(i, ip)) {
            connected = true;
            break;
          }
        }
        if (connected) break;
      }
      const bool edge = coarse_adjacency.contains(j, jp);
      if (edge != connected) violations.push_back({j, jp, edge, connected});
    }
  }
  return violations;
}

std::vector<HopViolation> check_hop_bound(const SparseMatrix& adjacency,
                                          std::span<const std::size_t> selected,
                                          const SparseMatrix& coarse_adjacency,
                                          std::size_t max_hops) {
  if (coarse_adjacency.rows() != selected.size()) {
    throw DimensionError("check_hop_bound: coarse adjacency does not match the selection");
  }
  std::vector<HopViolation> violations;
  std::vector<std::vector<std::size_t>> cache(selected.size());
  for (const Triplet& t : coarse_adjacency.entries()) {
    if (cache[t.row].empty()) cache[t.row] = bfs_distances(adjacency, selected[t.row]);
    const std::size_t hops = cache[t.row][selected[t.col]];
    if (hops > max_hops) violations.push_back({t.row, t.col, hops});
  }
  return violations;
}

}  // namespace otc
