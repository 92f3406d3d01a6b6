#include "otc/train/cross_validate.hpp"

#include <string>

#include "otc/data/folds.hpp"
#include "otc/error.hpp"
#include "otc/train/readout.hpp"
#include "otc/train/unsupervised.hpp"

namespace otc {

std::vector<Graph> strip_labels(std::span<const Graph> graphs) {
  std::vector<Graph> out;
  out.reserve(graphs.size());
  for (const Graph& g : graphs) out.push_back(g.without_label());
  return out;
}

CvReport cross_validate(std::span<const Graph> graphs, const TrainConfig& config,
                        std::size_t n_folds) {
  config.validate();
  if (graphs.size() < n_folds) {
    throw ContractError("cross_validate: " + std::to_string(graphs.size()) + " graphs for " +
                        std::to_string(n_folds) + " folds");
  }
  std::vector<int> labels;
  int num_classes = 0;
  for (const Graph& g : graphs) {
    if (!g.label()) throw ContractError("cross_validate: every graph needs a label");
    labels.push_back(*g.label());
    num_classes = std::max(num_classes, *g.label() + 1);
  }
  const std::vector<std::size_t> fold_of = split_folds(labels, n_folds, config.seed);
  const std::vector<Graph> unlabeled = strip_labels(graphs);

  std::vector<double> accuracies;
  for (std::size_t fold = 0; fold < n_folds; ++fold) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < graphs.size(); ++i) (fold_of[i] == fold ? test : train).push_back(i);

    std::vector<Graph> train_graphs;
    for (std::size_t i : train) train_graphs.push_back(unlabeled[i]);
    TrainConfig fold_config = config;
    fold_config.seed = config.seed + 1000 * (fold + 1);
    const UnsupervisedResult model = train_unsupervised(train_graphs, fold_config);

    const Matrix features = extract_features(unlabeled, model.params, config);
    std::vector<int> train_labels, test_labels;
    for (std::size_t i : train) train_labels.push_back(labels[i]);
    for (std::size_t i : test) test_labels.push_back(labels[i]);
    const ClassifierParams classifier =
        train_classifier(gather_rows(features, train), train_labels, num_classes,
                         config.classifier, fold_config.seed);
    accuracies.push_back(accuracy(predict(classifier, gather_rows(features, test)), test_labels));
  }
  return summarize(std::move(accuracies));
}

GridResult grid_search(std::span<const Graph> graphs, const TrainConfig& base,
                       std::span<const int> levels, std::span<const double> learning_rates,
                       std::size_t n_folds) {
  if (levels.empty() || learning_rates.empty()) throw ContractError("grid_search: empty grid");
  GridResult result;
  for (int l : levels) {
    for (double lr : learning_rates) {
      TrainConfig config = base;
      config.levels = l;
      config.lr = lr;
      result.points.push_back({l, lr, cross_validate(graphs, config, n_folds)});
      if (result.points.back().report.mean > result.points[result.best].report.mean) {
        result.best = result.points.size() - 1;
      }
    }
  }
  return result;
}

}  // namespace otc
