#include "otc/data/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "otc/error.hpp"

namespace otc {

std::string_view to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::node_label_one_hot:
      return "node-label-one-hot";
    case FeatureMode::node_attributes:
      return "node-attributes";
    case FeatureMode::degree_one_hot:
      return "degree-one-hot";
  }
  return "node-label-one-hot";
}

FeatureMode feature_mode_from_string(std::string_view name) {
  if (name == "node-label-one-hot") return FeatureMode::node_label_one_hot;
  if (name == "node-attributes") return FeatureMode::node_attributes;
  if (name == "degree-one-hot") return FeatureMode::degree_one_hot;
  throw ContractError("unknown feature mode '" + std::string(name) + "'");
}

FeatureSpec default_feature_spec(const TuDatasetRaw& raw) {
  FeatureSpec spec;
  spec.mode = raw.node_labels ? FeatureMode::node_label_one_hot : FeatureMode::degree_one_hot;
  return spec;
}

std::vector<Graph> build_features(const TuDatasetRaw& raw, const FeatureSpec& spec) {
  const std::size_t n = raw.num_nodes();
  const std::size_t n_graphs = raw.num_graphs();
  if (spec.mode == FeatureMode::node_label_one_hot && !raw.node_labels) {
    throw ContractError("feature mode node-label-one-hot needs " + raw.name + "_node_labels.txt");
  }
  if (spec.mode == FeatureMode::node_attributes && !raw.node_attributes) {
    throw ContractError("feature mode node-attributes needs " + raw.name +
                        "_node_attributes.txt");
  }

  // Local node numbering within each graph, in ascending global id.
  std::vector<std::vector<std::size_t>> members(n_graphs);
  std::vector<std::size_t> local(n);
  for (std::size_t node = 0; node < n; ++node) {
    auto& m = members[raw.graph_indicator[node] - 1];
    local[node] = m.size();
    m.push_back(node);
  }

  // Undirected edge sets; both directions and repeats collapse to weight 1.
  std::vector<std::set<std::pair<std::size_t, std::size_t>>> edges(n_graphs);
  for (const auto& [u1, v1] : raw.edges) {
    const std::size_t u = u1 - 1, v = v1 - 1;
    auto key = std::minmax(local[u], local[v]);
    edges[raw.graph_indicator[u] - 1].insert({key.first, key.second});
  }

  std::map<int, std::size_t> label_index;
  if (raw.node_labels) {
    for (int l : *raw.node_labels) label_index.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [l, idx] : label_index) idx = next++;
  }
  std::map<int, int> class_index;
  for (int l : raw.graph_labels) class_index.emplace(l, 0);
  {
    int next = 0;
    for (auto& [l, idx] : class_index) idx = next++;
  }

  std::vector<double> attr_mean, attr_scale;
  if (spec.mode == FeatureMode::node_attributes) {
    const std::size_t d = raw.node_attributes->empty() ? 0 : raw.node_attributes->front().size();
    attr_mean.assign(d, 0.0);
    attr_scale.assign(d, 1.0);
    if (spec.standardize_attributes && n > 0) {
      for (const auto& row : *raw.node_attributes)
        for (std::size_t j = 0; j < d; ++j) attr_mean[j] += row[j] / static_cast<double>(n);
      std::vector<double> var(d, 0.0);
      for (const auto& row : *raw.node_attributes)
        for (std::size_t j = 0; j < d; ++j)
          var[j] += (row[j] - attr_mean[j]) * (row[j] - attr_mean[j]) / static_cast<double>(n);
      for (std::size_t j = 0; j < d; ++j) attr_scale[j] = var[j] > 1e-24 ? 1.0 / std::sqrt(var[j]) : 0.0;
    } else {
      attr_mean.assign(d, 0.0);
    }
  }

  std::vector<Graph> graphs;
  graphs.reserve(n_graphs);
  for (std::size_t g = 0; g < n_graphs; ++g) {
    const std::size_t size = members[g].size();
    std::vector<Triplet> triplets;
    std::vector<std::size_t> degree(size, 0);
    for (const auto& [u, v] : edges[g]) {
      triplets.push_back({u, v, 1.0});
      if (u != v) {
        triplets.push_back({v, u, 1.0});
        ++degree[u];
        ++degree[v];
      }
    }

    Matrix features;
    switch (spec.mode) {
      case FeatureMode::node_label_one_hot:
        features = Matrix(size, label_index.size());
        for (std::size_t i = 0; i < size; ++i)
          features(i, label_index.at((*raw.node_labels)[members[g][i]])) = 1.0;
        break;
      case FeatureMode::degree_one_hot:
        features = Matrix(size, spec.max_degree + 1);
        for (std::size_t i = 0; i < size; ++i) features(i, std::min(degree[i], spec.max_degree)) = 1.0;
        break;
      case FeatureMode::node_attributes: {
        const std::size_t d = attr_mean.size();
        features = Matrix(size, d);
        for (std::size_t i = 0; i < size; ++i) {
          const auto& row = (*raw.node_attributes)[members[g][i]];
          for (std::size_t j = 0; j < d; ++j) features(i, j) = (row[j] - attr_mean[j]) * attr_scale[j];
        }
        break;
      }
    }
    graphs.emplace_back(SparseMatrix::from_triplets(size, size, std::move(triplets)),
                        std::move(features), class_index.at(raw.graph_labels[g]));
  }
  return graphs;
}

std::vector<int> graph_labels(const std::vector<Graph>& graphs) {
  std::vector<int> labels;
  labels.reserve(graphs.size());
  for (const Graph& g : graphs) {
    if (!g.label()) throw ContractError("graph_labels: graph without a label");
    labels.push_back(*g.label());
  }
  return labels;
}

}  // namespace otc
