#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "otc/graph/graph.hpp"
#include "otc/train/classifier.hpp"
#include "otc/train/model.hpp"

namespace otc {

/// Per fold: unsupervised training on the label-stripped training split,
/// frozen feature extraction for the whole fold, classifier training on the
/// training split and accuracy on the test split. Requires labeled graphs
/// and at least n_folds of them.
CvReport cross_validate(std::span<const Graph> graphs, const TrainConfig& config,
                        std::size_t n_folds = 10);

struct GridPoint {
  int levels = 1;
  double lr = 0.01;
  CvReport report;
};

struct GridResult {
  std::vector<GridPoint> points;
  std::size_t best = 0;  // highest mean accuracy; first wins ties
};

/// cross_validate over levels × learning rates with the remaining settings
/// taken from `base`.
GridResult grid_search(std::span<const Graph> graphs, const TrainConfig& base,
                       std::span<const int> levels, std::span<const double> learning_rates,
                       std::size_t n_folds = 10);

/// Copies of the graphs without labels.
std::vector<Graph> strip_labels(std::span<const Graph> graphs);

}  // namespace otc
