#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "otc/train/model.hpp"

namespace otc {

/// Two-layer perceptron over standardized graph features:
/// logits = relu(x̃·W1 + b1)·W2 + b2 with x̃ = (x − mean) / std.
struct ClassifierParams {
  Matrix mean;     // 1×F
  Matrix inv_std;  // 1×F, zero for constant columns
  Matrix w1, b1, w2, b2;
  int num_classes = 0;
};

/// Full-batch cross-entropy training with Adam. Throws ContractError when the
/// training labels contain a single class.
ClassifierParams train_classifier(const Matrix& features, std::span<const int> labels,
                                  int num_classes, const ClassifierConfig& config,
                                  std::uint64_t seed);

std::vector<int> predict(const ClassifierParams& params, const Matrix& features);

double accuracy(std::span<const int> predicted, std::span<const int> labels);

struct CvReport {
  std::vector<double> fold_accuracy;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over folds
};

CvReport summarize(std::vector<double> fold_accuracy);

/// Trains and tests the classifier on each fold of a fixed assignment
/// (fold_of[i] = fold of sample i).
CvReport classifier_cross_validate(const Matrix& features, std::span<const int> labels,
                                   std::span<const std::size_t> fold_of, std::size_t n_folds,
                                   const ClassifierConfig& config, std::uint64_t seed);

/// Rows of `m` in the given order.
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows);

}  // namespace otc
