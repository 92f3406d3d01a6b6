#include "otc/train/readout.hpp"

#include <algorithm>

#include "otc/error.hpp"
#include "otc/parallel.hpp"
#include "otc/train/forward.hpp"

namespace otc {

std::vector<double> readout(std::span<const Matrix> coarse_embeddings) {
  if (coarse_embeddings.empty()) throw ContractError("readout: no embedding levels");
  std::vector<double> out;
  for (const Matrix& z : coarse_embeddings) {
    if (z.empty()) throw ContractError("readout: empty embedding matrix");
    std::vector<double> maxima(z.row_span(0).begin(), z.row_span(0).end());
    std::vector<double> means(z.cols(), 0.0);
    for (std::size_t i = 0; i < z.rows(); ++i) {
      for (std::size_t j = 0; j < z.cols(); ++j) {
        maxima[j] = std::max(maxima[j], z(i, j));
        means[j] += z(i, j);
      }
    }
    for (double& m : means) m /= static_cast<double>(z.rows());
    out.insert(out.end(), maxima.begin(), maxima.end());
    out.insert(out.end(), means.begin(), means.end());
  }
  return out;
}

std::vector<Matrix> coarse_embeddings(const Graph& graph, const ModelParams& params,
                                      const TrainConfig& config) {
  Tape tape;
  const ForwardResult result = forward_pass(tape, graph, bind(tape, params, false), config);
  std::vector<Matrix> out;
  for (const Var& z : result.coarse_embeddings) out.push_back(z.value());
  return out;
}

Matrix extract_features(std::span<const Graph> graphs, const ModelParams& params,
                        const TrainConfig& config) {
  const std::size_t width = 2 * params.hidden * params.levels.size();
  Matrix features(graphs.size(), width);
  parallel_for(graphs.size(), config.jobs, [&](std::size_t i) {
    const std::vector<double> row = readout(coarse_embeddings(graphs[i], params, config));
    std::copy(row.begin(), row.end(), features.row_span(i).begin());
  });
  return features;
}

}  // namespace otc
