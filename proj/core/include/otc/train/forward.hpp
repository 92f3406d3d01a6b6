#pragma once

#include <vector>

#include "otc/coarsen.hpp"
#include "otc/gnn.hpp"
#include "otc/graph/graph.hpp"
#include "otc/train/model.hpp"

namespace otc {

/// Model parameters bound as leaves of one tape.
struct BoundModel {
  std::vector<LevelGnn> levels;
};

/// Binds every parameter matrix as a tracked variable, or as a constant when
/// `track` is false.
BoundModel bind(Tape& tape, const ModelParams& params, bool track = true);

struct ForwardResult {
  Var loss;                                // sum of level losses
  std::vector<Var> level_losses;           // W_γ^k per level
  std::vector<CoarseningLevel> levels;
  std::vector<Var> coarse_embeddings;      // Z_c per level
  std::vector<Var> coarse_features;        // X_c per level
  std::vector<SparseMatrix> structures;    // adjacency entering each level
};

/// Coarsens `graph` once per model level, feeding each coarse graph and its
/// decoded features into the next level, and sums the k-step transport
/// losses. Sinkhorn failures are rethrown with the level index attached.
ForwardResult forward_pass(Tape& tape, const Graph& graph, const BoundModel& model,
                           const TrainConfig& config);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<Matrix> gradients;  // ordered as ModelParams::tensors()
};

LossAndGradient loss_and_gradient(const Graph& graph, const ModelParams& params,
                                  const TrainConfig& config);
double loss_value(const Graph& graph, const ModelParams& params, const TrainConfig& config);

}  // namespace otc
