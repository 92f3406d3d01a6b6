#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace otc {

/// Stratified, seeded fold assignment: result[i] is the fold of sample i.
/// Fold sizes differ by at most one and each class is spread evenly.
/// Throws ContractError when there are fewer samples than folds.
std::vector<std::size_t> split_folds(std::span<const int> labels, std::size_t n_folds,
                                     std::uint64_t seed);

/// Seeded stratified subsample keeping ⌈fraction·N⌉ samples (at least
/// `minimum`), returned in ascending order.
std::vector<std::size_t> stratified_subsample(std::span<const int> labels, double fraction,
                                              std::uint64_t seed, std::size_t minimum = 1);

}  // namespace otc
