#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace otc {

/// Contents of a TU benchmark directory (NAME_A.txt, NAME_graph_indicator.txt,
/// NAME_graph_labels.txt and the optional NAME_node_labels.txt /
/// NAME_node_attributes.txt). Node and graph ids are 1-based as in the files.
struct TuDatasetRaw {
  std::string name;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> graph_indicator;  // node → graph id
  std::vector<int> graph_labels;
  std::optional<std::vector<int>> node_labels;
  std::optional<std::vector<std::vector<double>>> node_attributes;

  std::size_t num_nodes() const { return graph_indicator.size(); }
  std::size_t num_graphs() const { return graph_labels.size(); }
};

/// Throws FileError for a missing required file and FormatError (with file
/// name and line number) for malformed or inconsistent records.
TuDatasetRaw parse_tu_dataset(const std::filesystem::path& directory, const std::string& name);

}  // namespace otc
