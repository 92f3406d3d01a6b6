#pragma once

#include <span>
#include <vector>

#include "otc/graph/graph.hpp"
#include "otc/train/model.hpp"

namespace otc {

struct EpochRecord {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;       // mean over training graphs before the update
  double validation_loss = 0.0;  // mean over validation graphs after the update
};

struct UnsupervisedResult {
  ModelParams params;  // snapshot with the lowest validation loss
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_validation_loss = 0.0;
};

/// Mean loss and mean gradient over a set of graphs. Per-graph evaluations
/// run on `jobs` threads and are merged in index order, so the result does
/// not depend on the thread count.
struct BatchGradient {
  double loss = 0.0;
  std::vector<Matrix> gradients;
};
BatchGradient batch_gradient(std::span<const Graph> graphs, std::span<const std::size_t> indices,
                             const ModelParams& params, const TrainConfig& config);
double batch_loss(std::span<const Graph> graphs, std::span<const std::size_t> indices,
                  const ModelParams& params, const TrainConfig& config);

/// Full-batch Adam on the coarsening loss. A seeded fraction of the graphs
/// is held out for model selection. Graphs must carry no labels.
UnsupervisedResult train_unsupervised(std::span<const Graph> graphs, const TrainConfig& config);

}  // namespace otc
