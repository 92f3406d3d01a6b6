#include "otc/data/folds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "otc/error.hpp"

namespace otc {
namespace {

// Samples grouped by class (ascending class value), each group shuffled, then
// concatenated.
std::vector<std::size_t> stratified_order(std::span<const int> labels, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order;
  order.reserve(labels.size());
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    order.insert(order.end(), members.begin(), members.end());
  }
  return order;
}

}  // namespace

std::vector<std::size_t> split_folds(std::span<const int> labels, std::size_t n_folds,
                                     std::uint64_t seed) {
  if (n_folds == 0) throw ContractError("split_folds: need at least one fold");
  if (labels.size() < n_folds) {
    throw ContractError("split_folds: " + std::to_string(labels.size()) + " samples for " +
                        std::to_string(n_folds) + " folds");
  }
  const std::vector<std::size_t> order = stratified_order(labels, seed);
  std::vector<std::size_t> fold_of(labels.size());
  // Dealing the class-grouped order round-robin keeps fold sizes within one
  // of each other and spreads every class across all folds.
  for (std::size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % n_folds;
  return fold_of;
}

std::vector<std::size_t> stratified_subsample(std::span<const int> labels, double fraction,
                                              std::uint64_t seed, std::size_t minimum) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ContractError("stratified_subsample: fraction must lie in (0, 1]");
  }
  const std::size_t total = labels.size();
  std::size_t keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total)));
  keep = std::min(total, std::max(keep, minimum));
  const std::vector<std::size_t> order = stratified_order(labels, seed);
  // Evenly spaced positions in the class-grouped order keep class proportions.
  std::vector<std::size_t> picked;
  picked.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    picked.push_back(order[(r * total) / keep]);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace otc
