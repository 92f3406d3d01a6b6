#include "otc/train/model.hpp"

#include <cmath>
#include <string>

#include "otc/error.hpp"

namespace otc {

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw ContractError("invalid configuration: " + what); };
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (steps < 1) fail("k must be at least 1");
  if (!(p > 0.0)) fail("p must be positive");
  if (!(ratio > 0.0 && ratio <= 1.0)) fail("ratio must lie in (0, 1]");
  if (levels < 1) fail("levels must be at least 1");
  if (hidden < 1) fail("hidden must be at least 1");
  if (!(lr > 0.0)) fail("lr must be positive");
  if (max_epochs < 1) fail("max_epochs must be at least 1");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) fail("lr_decay must lie in (0, 1]");
  if (decay_every < 1) fail("decay_every must be at least 1");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    fail("validation_fraction must lie in [0, 1)");
  }
  if (!(init_gain > 0.0)) fail("init_gain must be positive");
  if (jobs < 1) fail("jobs must be at least 1");
  if (classifier.hidden < 1 || classifier.epochs < 1 || !(classifier.lr > 0.0)) {
    fail("classifier settings must be positive");
  }
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out;
  for (auto& l : levels) {
    out.push_back(&l.scoring);
    out.push_back(&l.encoder);
    out.push_back(&l.decoder);
  }
  return out;
}

std::vector<const Matrix*> ModelParams::tensors() const {
  std::vector<const Matrix*> out;
  for (const auto& l : levels) {
    out.push_back(&l.scoring);
    out.push_back(&l.encoder);
    out.push_back(&l.decoder);
  }
  return out;
}

namespace {

Matrix glorot(std::size_t rows, std::size_t cols, double gain, std::mt19937_64& rng) {
  const double limit = gain * std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

}  // namespace

ModelParams init_model(std::size_t feature_dim, const TrainConfig& config, std::mt19937_64& rng) {
  config.validate();
  if (feature_dim == 0) throw ContractError("init_model: feature dimension must be positive");
  ModelParams params;
  params.feature_dim = feature_dim;
  params.hidden = static_cast<std::size_t>(config.hidden);
  params.encoder_activation = config.encoder_activation;
  params.decoder_activation = config.decoder_activation;
  for (int l = 0; l < config.levels; ++l) {
    LevelParams level;
    level.scoring = glorot(feature_dim, 1, 1.0, rng);
    level.encoder = glorot(feature_dim, params.hidden, config.init_gain, rng);
    level.decoder = glorot(params.hidden, feature_dim, config.init_gain, rng);
    params.levels.push_back(std::move(level));
  }
  return params;
}

}  // namespace otc
