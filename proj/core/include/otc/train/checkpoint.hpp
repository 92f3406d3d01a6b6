#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "otc/data/features.hpp"
#include "otc/train/model.hpp"

namespace otc {

inline constexpr std::string_view kCheckpointVersion = "otcoarsen-ckpt/1";

/// Frozen unsupervised model together with everything needed to rebuild its
/// inputs.
struct Checkpoint {
  std::string dataset;
  double subsample = 1.0;  // stratified fraction of the dataset used
  FeatureSpec features;
  TrainConfig config;
  ModelParams params;
};

/// JSON document: version, seed, dataset, feature spec, config and every
/// parameter matrix as nested arrays with shape metadata.
std::string checkpoint_to_json(const Checkpoint& checkpoint);
/// Throws FormatError for malformed documents or a foreign version.
Checkpoint checkpoint_from_json(std::string_view text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace otc
