#include "otc/train/forward.hpp"

#include <string>

#include "otc/error.hpp"
#include "otc/ot.hpp"
#include "otc/tensor/ops.hpp"

namespace otc {

BoundModel bind(Tape& tape, const ModelParams& params, bool track) {
  auto leaf = [&](const Matrix& m) { return track ? tape.variable(m) : tape.constant(m); };
  BoundModel bound;
  for (const LevelParams& l : params.levels) {
    LevelGnn level;
    level.scoring.weight = leaf(l.scoring);
    level.encoder = {leaf(l.encoder), params.encoder_activation};
    level.decoder = {leaf(l.decoder), params.decoder_activation};
    bound.levels.push_back(level);
  }
  return bound;
}

ForwardResult forward_pass(Tape& tape, const Graph& graph, const BoundModel& model,
                           const TrainConfig& config) {
  if (graph.num_nodes() == 0) throw ContractError("forward_pass: empty graph");
  if (model.levels.empty()) throw ContractError("forward_pass: model has no levels");
  if (graph.feature_dim() != model.levels.front().scoring.weight.rows()) {
    throw DimensionError("forward_pass: graph has " + std::to_string(graph.feature_dim()) +
                         " features, model expects " +
                         std::to_string(model.levels.front().scoring.weight.rows()));
  }

  ForwardResult out;
  Var adjacency = tape.constant(graph.adjacency().to_dense());
  SparseMatrix structure = graph.adjacency();
  Var features = tape.constant(graph.features());
  Var total;
  for (std::size_t l = 0; l < model.levels.size(); ++l) {
    const LevelGnn& params = model.levels[l];
    try {
      Var normalized = normalized_adjacency(adjacency);
      CoarseningLevel level =
          coarsen(adjacency, structure, normalized, features, params.scoring, config.ratio);
      Var normalized_coarse = normalized_adjacency(level.coarse_adjacency);
      EncodeDecode ed = encode_decode_normalized(normalized, features, level.coarsening,
                                                 normalized_coarse, params);
      TransportProblem problem{cost_matrix(features, ed.coarse_features, config.p),
                               uniform_marginal(features.rows()),
                               uniform_marginal(level.size()), config.gamma, config.steps};
      Var level_loss = ot_distance(problem);

      total = total.valid() ? add(total, level_loss) : level_loss;
      out.level_losses.push_back(level_loss);
      out.coarse_embeddings.push_back(ed.coarse_embeddings);
      out.coarse_features.push_back(ed.coarse_features);
      out.structures.push_back(structure);

      adjacency = level.coarse_adjacency;
      structure = level.coarse_structure;
      features = ed.coarse_features;
      out.levels.push_back(std::move(level));
    } catch (const NumericalError& e) {
      throw NumericalError("coarsening level " + std::to_string(l + 1) + ": " + e.what());
    }
  }
  out.loss = total;
  return out;
}

LossAndGradient loss_and_gradient(const Graph& graph, const ModelParams& params,
                                  const TrainConfig& config) {
  Tape tape;
  const BoundModel model = bind(tape, params, true);
  const ForwardResult result = forward_pass(tape, graph, model, config);
  tape.backward(result.loss);
  LossAndGradient out;
  out.loss = result.loss.value().scalar();
  for (const LevelGnn& l : model.levels) {
    out.gradients.push_back(l.scoring.weight.grad());
    out.gradients.push_back(l.encoder.weight.grad());
    out.gradients.push_back(l.decoder.weight.grad());
  }
  return out;
}

double loss_value(const Graph& graph, const ModelParams& params, const TrainConfig& config) {
  Tape tape;
  const BoundModel model = bind(tape, params, false);
  return forward_pass(tape, graph, model, config).loss.value().scalar();
}

}  // namespace otc
