#include "otc/train/unsupervised.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "otc/error.hpp"
#include "otc/parallel.hpp"
#include "otc/train/adam.hpp"
#include "otc/train/forward.hpp"

namespace otc {

BatchGradient batch_gradient(std::span<const Graph> graphs, std::span<const std::size_t> indices,
                             const ModelParams& params, const TrainConfig& config) {
  std::vector<LossAndGradient> parts(indices.size());
  parallel_for(indices.size(), config.jobs, [&](std::size_t i) {
    parts[i] = loss_and_gradient(graphs[indices[i]], params, config);
  });
  BatchGradient out;
  for (const Matrix* p : params.tensors()) out.gradients.emplace_back(p->rows(), p->cols());
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(indices.size(), 1));
  for (const auto& part : parts) {
    out.loss += part.loss * inv;
    for (std::size_t t = 0; t < part.gradients.size(); ++t) axpy(inv, part.gradients[t], out.gradients[t]);
  }
  return out;
}

double batch_loss(std::span<const Graph> graphs, std::span<const std::size_t> indices,
                  const ModelParams& params, const TrainConfig& config) {
  std::vector<double> losses(indices.size());
  parallel_for(indices.size(), config.jobs, [&](std::size_t i) {
    losses[i] = loss_value(graphs[indices[i]], params, config);
  });
  double total = 0.0;
  for (double l : losses) total += l;
  return indices.empty() ? 0.0 : total / static_cast<double>(indices.size());
}

UnsupervisedResult train_unsupervised(std::span<const Graph> graphs, const TrainConfig& config) {
  config.validate();
  if (graphs.empty()) throw ContractError("train_unsupervised: empty dataset");
  const std::size_t dim = graphs.front().feature_dim();
  for (const Graph& g : graphs) {
    if (g.label()) throw ContractError("train_unsupervised: graphs must not carry labels");
    if (g.feature_dim() != dim) throw DimensionError("train_unsupervised: mixed feature dimensions");
  }

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(graphs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = static_cast<std::size_t>(
      std::floor(config.validation_fraction * static_cast<double>(graphs.size()) + 0.5));
  if (config.validation_fraction > 0.0 && n_val == 0 && graphs.size() >= 2) n_val = 1;
  if (n_val >= graphs.size()) n_val = graphs.size() - 1;
  std::vector<std::size_t> validation(order.begin(), order.begin() + static_cast<long>(n_val));
  std::vector<std::size_t> training(order.begin() + static_cast<long>(n_val), order.end());
  std::sort(validation.begin(), validation.end());
  std::sort(training.begin(), training.end());

  UnsupervisedResult result;
  ModelParams params = init_model(dim, config, rng);
  const auto tensors = params.tensors();
  AdamState adam =
      make_adam_state(std::vector<const Matrix*>(tensors.begin(), tensors.end()), config.lr);

  const auto& selection = validation.empty() ? training : validation;
  result.params = params;
  result.best_validation_loss = batch_loss(graphs, selection, params, config);
  result.best_epoch = -1;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    adam.lr = learning_rate_at(epoch, config.lr, config.lr_decay, config.decay_every);
    BatchGradient batch = batch_gradient(graphs, training, params, config);
    adam_step(tensors, batch.gradients, adam);
    const double val = batch_loss(graphs, selection, params, config);
    if (!std::isfinite(batch.loss) || !std::isfinite(val)) {
      throw NumericalError("train_unsupervised: loss became non-finite at epoch " +
                           std::to_string(epoch));
    }
    result.history.push_back({epoch, adam.lr, batch.loss, val});
    if (val < result.best_validation_loss) {
      result.best_validation_loss = val;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  return result;
}

}  // namespace otc
