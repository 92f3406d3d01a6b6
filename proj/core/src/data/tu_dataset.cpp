#include "otc/data/tu_dataset.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

#include "otc/error.hpp"

namespace otc {
namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Calls on_record(fields, line_number) for every non-empty line.
template <typename F>
void for_each_record(const fs::path& file, F on_record) {
  std::ifstream in(file);
  if (!in) throw FileError("cannot open " + file.string());
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    fields.clear();
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    on_record(fields, line_no);
  }
}

[[noreturn]] void format_error(const fs::path& file, std::size_t line, const std::string& what) {
  throw FormatError(file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view field, const fs::path& file, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    format_error(file, line, "cannot parse '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

TuDatasetRaw parse_tu_dataset(const fs::path& directory, const std::string& name) {
  TuDatasetRaw raw;
  raw.name = name;
  auto file = [&](const char* suffix) { return directory / (name + suffix); };
  const fs::path edges_file = file("_A.txt");
  const fs::path indicator_file = file("_graph_indicator.txt");
  const fs::path labels_file = file("_graph_labels.txt");
  for (const auto& required : {edges_file, indicator_file, labels_file}) {
    if (!fs::exists(required)) throw FileError("missing dataset file " + required.string());
  }

  for_each_record(indicator_file, [&](const auto& f, std::size_t line) {
    if (f.size() != 1) format_error(indicator_file, line, "expected one graph id");
    const auto id = parse_number<std::size_t>(f[0], indicator_file, line);
    if (id == 0) format_error(indicator_file, line, "graph ids are 1-based");
    raw.graph_indicator.push_back(id);
  });
  for_each_record(labels_file, [&](const auto& f, std::size_t line) {
    if (f.size() != 1) format_error(labels_file, line, "expected one label");
    raw.graph_labels.push_back(parse_number<int>(f[0], labels_file, line));
  });
  for (std::size_t node = 0; node < raw.graph_indicator.size(); ++node) {
    if (raw.graph_indicator[node] > raw.graph_labels.size()) {
      format_error(indicator_file, node + 1,
                   "graph " + std::to_string(raw.graph_indicator[node]) + " has no label (only " +
                       std::to_string(raw.graph_labels.size()) + " labels)");
    }
  }

  const std::size_t n = raw.graph_indicator.size();
  for_each_record(edges_file, [&](const auto& f, std::size_t line) {
    if (f.size() != 2) format_error(edges_file, line, "expected 'row, col'");
    const auto u = parse_number<std::size_t>(f[0], edges_file, line);
    const auto v = parse_number<std::size_t>(f[1], edges_file, line);
    if (u == 0 || v == 0 || u > n || v > n) {
      format_error(edges_file, line, "node id out of range 1.." + std::to_string(n));
    }
    if (raw.graph_indicator[u - 1] != raw.graph_indicator[v - 1]) {
      format_error(edges_file, line, "edge joins nodes of different graphs");
    }
    raw.edges.emplace_back(u, v);
  });

  const fs::path node_labels_file = file("_node_labels.txt");
  if (fs::exists(node_labels_file)) {
    std::vector<int> labels;
    for_each_record(node_labels_file, [&](const auto& f, std::size_t line) {
      labels.push_back(parse_number<int>(f[0], node_labels_file, line));
    });
    if (labels.size() != n) {
      format_error(node_labels_file, labels.size(),
                   std::to_string(labels.size()) + " node labels for " + std::to_string(n) +
                       " nodes");
    }
    raw.node_labels = std::move(labels);
  }

  const fs::path attributes_file = file("_node_attributes.txt");
  if (fs::exists(attributes_file)) {
    std::vector<std::vector<double>> attributes;
    for_each_record(attributes_file, [&](const auto& f, std::size_t line) {
      std::vector<double> row;
      for (const auto& field : f) row.push_back(parse_number<double>(field, attributes_file, line));
      if (!attributes.empty() && row.size() != attributes.front().size()) {
        format_error(attributes_file, line, "attribute rows differ in length");
      }
      attributes.push_back(std::move(row));
    });
    if (attributes.size() != n) {
      format_error(attributes_file, attributes.size(),
                   std::to_string(attributes.size()) + " attribute rows for " + std::to_string(n) +
                       " nodes");
    }
    raw.node_attributes = std::move(attributes);
  }
  return raw;
}

}  // namespace otc
