#pragma once

#include <span>
#include <vector>

#include "otc/graph/graph.hpp"
#include "otc/train/model.hpp"

namespace otc {

/// Per level, column maxima followed by column means of Z_c; levels are
/// concatenated in order. Throws ContractError on an empty list or matrix.
std::vector<double> readout(std::span<const Matrix> coarse_embeddings);

/// Coarse embeddings Z_c of every level for one graph under frozen parameters.
std::vector<Matrix> coarse_embeddings(const Graph& graph, const ModelParams& params,
                                      const TrainConfig& config);

/// One readout row per graph (N × 2hL).
Matrix extract_features(std::span<const Graph> graphs, const ModelParams& params,
                        const TrainConfig& config);

}  // namespace otc
