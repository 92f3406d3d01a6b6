#include "otc/train/classifier.hpp"

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "otc/error.hpp"
#include "otc/tensor/ops.hpp"
#include "otc/train/adam.hpp"

namespace otc {
namespace {

Matrix standardize(const ClassifierParams& p, const Matrix& features) {
  if (features.cols() != p.mean.cols()) {
    throw DimensionError("classifier expects " + std::to_string(p.mean.cols()) +
                         " features, got " + features.shape_string());
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t j = 0; j < features.cols(); ++j)
      out(i, j) = (features(i, j) - p.mean(0, j)) * p.inv_std(0, j);
  return out;
}

Var logits(Tape& tape, const Matrix& x, Var w1, Var b1, Var w2, Var b2) {
  Var hidden = relu(add_row(matmul(tape.constant(x), w1), b1));
  return add_row(matmul(hidden, w2), b2);
}

}  // namespace

ClassifierParams train_classifier(const Matrix& features, std::span<const int> labels,
                                  int num_classes, const ClassifierConfig& config,
                                  std::uint64_t seed) {
  if (features.rows() != labels.size()) {
    throw DimensionError("train_classifier: " + std::to_string(labels.size()) +
                         " labels for features " + features.shape_string());
  }
  if (features.rows() == 0) throw ContractError("train_classifier: no training samples");
  const std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2) {
    throw ContractError("train_classifier: degenerate labels, training split has a single class");
  }
  for (int c : classes) {
    if (c < 0 || c >= num_classes) throw IndexError("train_classifier: label out of range");
  }

  const std::size_t n = features.rows(), f = features.cols();
  ClassifierParams p;
  p.num_classes = num_classes;
  p.mean = Matrix(1, f);
  p.inv_std = Matrix(1, f);
  for (std::size_t j = 0; j < f; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += features(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (features(i, j) - mean) * (features(i, j) - mean);
    var /= static_cast<double>(n);
    p.mean(0, j) = mean;
    p.inv_std(0, j) = var > 1e-24 ? 1.0 / std::sqrt(var) : 0.0;
  }
  const Matrix x = standardize(p, features);

  std::mt19937_64 rng(seed);
  auto glorot = [&rng](std::size_t r, std::size_t c) {
    const double limit = std::sqrt(6.0 / static_cast<double>(r + c));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix m(r, c);
    for (double& v : m.values()) v = dist(rng);
    return m;
  };
  const auto h = static_cast<std::size_t>(config.hidden);
  const auto k = static_cast<std::size_t>(num_classes);
  p.w1 = glorot(f, h);
  p.b1 = Matrix(1, h);
  p.w2 = glorot(h, k);
  p.b2 = Matrix(1, k);

  std::vector<Matrix*> tensors{&p.w1, &p.b1, &p.w2, &p.b2};
  AdamState adam = make_adam_state(std::vector<const Matrix*>(tensors.begin(), tensors.end()),
                                   config.lr);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    adam.lr = learning_rate_at(epoch, config.lr);
    Tape tape;
    Var w1 = tape.variable(p.w1), b1 = tape.variable(p.b1);
    Var w2 = tape.variable(p.w2), b2 = tape.variable(p.b2);
    Var loss = softmax_cross_entropy(logits(tape, x, w1, b1, w2, b2), labels);
    tape.backward(loss);
    const std::vector<Matrix> grads{w1.grad(), b1.grad(), w2.grad(), b2.grad()};
    adam_step(tensors, grads, adam);
  }
  return p;
}

std::vector<int> predict(const ClassifierParams& params, const Matrix& features) {
  const Matrix x = standardize(params, features);
  Tape tape;
  const Matrix out = logits(tape, x, tape.constant(params.w1), tape.constant(params.b1),
                            tape.constant(params.w2), tape.constant(params.b2))
                         .value();
  std::vector<int> predicted(out.rows(), 0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t c = 1; c < out.cols(); ++c)
      if (out(i, c) > out(i, static_cast<std::size_t>(predicted[i]))) predicted[i] = static_cast<int>(c);
  }
  return predicted;
}

double accuracy(std::span<const int> predicted, std::span<const int> labels) {
  if (predicted.size() != labels.size() || labels.empty()) {
    throw ContractError("accuracy: prediction and label counts differ or are empty");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

CvReport summarize(std::vector<double> fold_accuracy) {
  CvReport report;
  report.fold_accuracy = std::move(fold_accuracy);
  if (report.fold_accuracy.empty()) return report;
  const double n = static_cast<double>(report.fold_accuracy.size());
  for (double a : report.fold_accuracy) report.mean += a;
  report.mean /= n;
  double var = 0.0;
  for (double a : report.fold_accuracy) var += (a - report.mean) * (a - report.mean);
  report.stddev = std::sqrt(var / n);
  return report;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(rows[r], c);
  return out;
}

CvReport classifier_cross_validate(const Matrix& features, std::span<const int> labels,
                                   std::span<const std::size_t> fold_of, std::size_t n_folds,
                                   const ClassifierConfig& config, std::uint64_t seed) {
  if (fold_of.size() != labels.size() || features.rows() != labels.size()) {
    throw DimensionError("classifier_cross_validate: features, labels and folds disagree in size");
  }
  int num_classes = 0;
  for (int l : labels) num_classes = std::max(num_classes, l + 1);
  std::vector<double> accuracies;
  for (std::size_t fold = 0; fold < n_folds; ++fold) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < labels.size(); ++i) (fold_of[i] == fold ? test : train).push_back(i);
    if (test.empty()) continue;
    std::vector<int> train_labels, test_labels;
    for (std::size_t i : train) train_labels.push_back(labels[i]);
    for (std::size_t i : test) test_labels.push_back(labels[i]);
    const ClassifierParams p = train_classifier(gather_rows(features, train), train_labels,
                                                num_classes, config, seed + fold);
    accuracies.push_back(accuracy(predict(p, gather_rows(features, test)), test_labels));
  }
  return summarize(std::move(accuracies));
}

}  // namespace otc
