#include "otc/cli/dot.hpp"

#include <algorithm>
#include <cstdio>

#include "otc/tensor/tape.hpp"
#include "otc/train/forward.hpp"

namespace otc::cli {

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", w);
  return buf;
}

std::string to_dot(const SparseMatrix& adjacency, std::span<const std::size_t> hollow,
                   std::string_view name) {
  std::vector<bool> is_hollow(adjacency.rows(), false);
  for (std::size_t i : hollow) is_hollow.at(i) = true;

  std::string out = "graph \"" + std::string(name) + "\" {\n";
  out += "  node [shape=circle, style=filled, fillcolor=black, fontcolor=white];\n";
  for (std::size_t i = 0; i < adjacency.rows(); ++i) {
    out += "  " + std::to_string(i);
    if (is_hollow[i]) out += " [style=solid, fillcolor=white, fontcolor=black]";
    out += ";\n";
  }
  for (const Triplet& t : adjacency.entries()) {
    if (t.row >= t.col) continue;
    out += "  " + std::to_string(t.row) + " -- " + std::to_string(t.col) + " [label=\"" +
           format_weight(t.weight) + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::vector<std::string> coarsening_sequence_dot(const Graph& graph, const ModelParams& params,
                                                 const TrainConfig& config) {
  Tape tape;
  const ForwardResult fwd = forward_pass(tape, graph, bind(tape, params, false), config);
  std::vector<std::string> files;
  const std::size_t levels = fwd.levels.size();
  for (std::size_t l = 0; l <= levels; ++l) {
    const SparseMatrix& structure = l == 0 ? fwd.structures[0] : fwd.levels[l - 1].coarse_structure;
    std::span<const std::size_t> hollow;
    if (l < levels) hollow = fwd.levels[l].selected;
    files.push_back(to_dot(structure, hollow, "level_" + std::to_string(l)));
  }
  return files;
}

}  // namespace otc::cli
