#include "otc/graph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "otc/error.hpp"
#include "otc/tensor/ops.hpp"

namespace otc {

Graph::Graph(SparseMatrix adjacency, Matrix features, std::optional<int> label)
    : adjacency_(std::move(adjacency)), features_(std::move(features)), label_(label) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw DimensionError("graph adjacency must be square, got " +
                         std::to_string(adjacency_.rows()) + "×" +
                         std::to_string(adjacency_.cols()));
  }
  if (features_.rows() != adjacency_.rows()) {
    throw DimensionError("graph has " + std::to_string(adjacency_.rows()) +
                         " nodes but features " + features_.shape_string());
  }
  for (const Triplet& t : adjacency_.entries()) {
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
      throw DomainError("edge (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                        ") has invalid weight " + std::to_string(t.weight));
    }
  }
  if (adjacency_.asymmetry() > kSymmetryTolerance) {
    throw ContractError("graph adjacency is not symmetric");
  }
}

Graph Graph::without_label() const {
  Graph g = *this;
  g.label_.reset();
  return g;
}

SparseMatrix normalized_adjacency(const SparseMatrix& adjacency) {
  const std::size_t n = adjacency.rows();
  std::vector<double> degree(n, 1.0);
  std::vector<double> self(n, 0.0);
  for (const Triplet& t : adjacency.entries()) {
    degree[t.row] += t.weight;
    if (t.row == t.col) self[t.row] = t.weight;
  }
  std::vector<Triplet> out;
  out.reserve(adjacency.nnz() + n);
  for (const Triplet& t : adjacency.entries()) {
    if (t.row == t.col) continue;
    out.push_back({t.row, t.col, t.weight / std::sqrt(degree[t.row] * degree[t.col])});
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back({i, i, (self[i] + 1.0) / degree[i]});
  return SparseMatrix::from_triplets(n, n, std::move(out));
}

Var normalized_adjacency(Var adjacency) {
  const std::size_t n = adjacency.rows();
  if (adjacency.cols() != n) {
    throw DimensionError("normalized_adjacency: adjacency must be square, got " +
                         adjacency.value().shape_string());
  }
  Tape& tape = adjacency.tape();
  Var with_loops = add(adjacency, tape.constant(Matrix::identity(n)));
  // d^{-1/2} = exp(-½ log d); degrees are ≥ 1.
  Var inv_sqrt_degree = exp(scale(log(row_sum(with_loops)), -0.5));
  Var outer = matmul(inv_sqrt_degree, transpose(inv_sqrt_degree));
  return mul(with_loops, outer);
}

double total_edge_weight(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("total_edge_weight: matrix must be square");
  // Summed in sorted order so relabeling the nodes cannot change the result.
  std::vector<double> weights;
  weights.reserve(a.nnz());
  for (const Triplet& t : a.entries()) weights.push_back(t.weight);
  std::sort(weights.begin(), weights.end());
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

std::vector<std::size_t> bfs_distances(const SparseMatrix& adjacency, std::size_t source) {
  const std::size_t n = adjacency.rows();
  if (source >= n) {
    throw IndexError("bfs source " + std::to_string(source) + " out of range for " +
                     std::to_string(n) + " nodes");
  }
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (const Triplet& t : adjacency.entries())
    if (t.row != t.col) neighbors[t.row].push_back(t.col);
  std::vector<std::size_t> dist(n, kUnreachable);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : neighbors[u]) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source) {
  return bfs_distances(g.adjacency(), source);
}

Graph permute(const Graph& g, std::span<const std::size_t> perm) {
  const std::size_t n = g.num_nodes();
  if (perm.size() != n) {
    throw ContractError("permutation of length " + std::to_string(perm.size()) + " for " +
                        std::to_string(n) + " nodes");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw ContractError("permutation is not a bijection");
    seen[p] = true;
  }
  std::vector<Triplet> edges;
  edges.reserve(g.adjacency().nnz());
  for (const Triplet& t : g.adjacency().entries()) edges.push_back({perm[t.row], perm[t.col], t.weight});
  Matrix features(n, g.feature_dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < g.feature_dim(); ++j) features(perm[i], j) = g.features()(i, j);
  return Graph(SparseMatrix::from_triplets(n, n, std::move(edges)), std::move(features), g.label());
}

}  // namespace otc
