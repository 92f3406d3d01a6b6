#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "otc/data/tu_dataset.hpp"
#include "otc/graph/graph.hpp"

namespace otc {

enum class FeatureMode { node_label_one_hot, node_attributes, degree_one_hot };

std::string_view to_string(FeatureMode mode);
FeatureMode feature_mode_from_string(std::string_view name);

struct FeatureSpec {
  FeatureMode mode = FeatureMode::node_label_one_hot;
  std::size_t max_degree = 10;  // degree one-hot length is max_degree + 1
  bool standardize_attributes = true;
};

/// Node labels when present, otherwise capped degree one-hot.
FeatureSpec default_feature_spec(const TuDatasetRaw& raw);

/// Splits the raw dataset into graphs with unit-weight symmetric adjacency
/// and node features per `spec`. Graph labels become class indices
/// 0..C−1 in ascending order of the raw values. Throws ContractError when the
/// data needed by the mode is absent.
std::vector<Graph> build_features(const TuDatasetRaw& raw, const FeatureSpec& spec);

/// Class indices of the graphs (labels must be present).
std::vector<int> graph_labels(const std::vector<Graph>& graphs);

}  // namespace otc
