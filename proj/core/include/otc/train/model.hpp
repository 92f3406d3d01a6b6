#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "otc/gnn.hpp"
#include "otc/tensor/matrix.hpp"

namespace otc {

struct ClassifierConfig {
  int hidden = 64;
  int epochs = 100;
  double lr = 0.01;
};

/// Hyperparameters of the unsupervised coarsening model and its evaluation.
struct TrainConfig {
  double gamma = 1.0;   // entropic regularization
  int steps = 5;        // Sinkhorn rounds k
  double p = 2.0;       // cost exponent
  double ratio = 0.5;   // coarsening ratio
  int levels = 1;
  int hidden = 64;
  double init_gain = 1.0;  // Glorot gain of the encoder and decoder weights
  double lr = 0.01;
  int max_epochs = 200;
  double lr_decay = 0.5;
  int decay_every = 50;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  int jobs = 1;
  Activation encoder_activation = Activation::sigmoid;
  Activation decoder_activation = Activation::sigmoid;
  ClassifierConfig classifier;

  /// Throws ContractError when a field is out of range.
  void validate() const;
};

struct LevelParams {
  Matrix scoring;  // d×1
  Matrix encoder;  // d×h
  Matrix decoder;  // h×d
};

struct ModelParams {
  std::size_t feature_dim = 0;
  std::size_t hidden = 0;
  Activation encoder_activation = Activation::sigmoid;
  Activation decoder_activation = Activation::sigmoid;
  std::vector<LevelParams> levels;

  /// Parameter matrices in a fixed order: per level scoring, encoder, decoder.
  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
};

/// Glorot-uniform initialization of every level.
ModelParams init_model(std::size_t feature_dim, const TrainConfig& config, std::mt19937_64& rng);

}  // namespace otc
