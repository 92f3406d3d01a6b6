#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otc/graph/graph.hpp"
#include "otc/graph/sparse_matrix.hpp"
#include "otc/train/model.hpp"

namespace otc::cli {

/// Undirected DOT drawing. Nodes listed in `hollow` are drawn unfilled, the
/// others filled; each edge i<j carries its weight as a label and self-loops
/// are left out.
std::string to_dot(const SparseMatrix& adjacency, std::span<const std::size_t> hollow,
                   std::string_view name);

/// %g rendering used for edge labels.
std::string format_weight(double w);

/// Drawings of a graph's coarsening sequence under frozen parameters. Entry 0
/// is the input graph, entry ℓ the coarse graph after level ℓ; in each the
/// nodes kept by the next level are hollow.
std::vector<std::string> coarsening_sequence_dot(const Graph& graph, const ModelParams& params,
                                                 const TrainConfig& config);

}  // namespace otc::cli
