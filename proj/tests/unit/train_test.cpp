#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "otc/error.hpp"
#include "otc/graph/graph.hpp"
#include "otc/ot.hpp"
#include "otc/data/folds.hpp"
#include "otc/train/adam.hpp"
#include "otc/train/checkpoint.hpp"
#include "otc/train/classifier.hpp"
#include "otc/train/cross_validate.hpp"
#include "otc/train/forward.hpp"
#include "otc/train/model.hpp"
#include "otc/train/readout.hpp"
#include "otc/train/unsupervised.hpp"

namespace otc {
namespace {

using testing::random_matrix;

TrainConfig small_config(int levels = 1) {
  TrainConfig c;
  c.levels = levels;
  c.hidden = 4;
  c.max_epochs = 5;
  c.seed = 3;
  c.classifier.hidden = 8;
  c.classifier.epochs = 20;
  return c;
}

ModelParams model_for(std::size_t d, const TrainConfig& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return init_model(d, c, rng);
}

std::vector<Graph> unlabeled_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(testing::random_graph(4 + rng() % 6, 3, 0.5, rng));
  return out;
}

// Two classes that differ in density and feature level.
std::vector<Graph> labeled_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int label = int(i % 2);
    const std::size_t n = 5 + rng() % 5;
    const Matrix x = random_matrix(n, 2, rng, label ? 0.5 : 0.0, label ? 1.0 : 0.5);
    out.emplace_back(testing::erdos_renyi(n, label ? 0.8 : 0.3, rng), x, label);
  }
  return out;
}

TEST(TrainConfig, ValidateRejectsOutOfRange) {
  EXPECT_NO_THROW(TrainConfig{}.validate());
  auto broken = [](auto edit) {
    TrainConfig c;
    edit(c);
    return c;
  };
  EXPECT_THROW(broken([](TrainConfig& c) { c.gamma = 0; }).validate(), ContractError);
  EXPECT_THROW(broken([](TrainConfig& c) { c.steps = 0; }).validate(), ContractError);
  EXPECT_THROW(broken([](TrainConfig& c) { c.levels = 0; }).validate(), ContractError);
  EXPECT_THROW(broken([](TrainConfig& c) { c.init_gain = 0; }).validate(), ContractError);
  EXPECT_THROW(broken([](TrainConfig& c) { c.ratio = 1.5; }).validate(), ContractError);
}

TEST(InitModel, ShapesAndSeeding) {
  const TrainConfig c = small_config(2);
  const ModelParams p = model_for(3, c, 9);
  ASSERT_EQ(p.levels.size(), 2u);
  for (const LevelParams& level : p.levels) {
    EXPECT_EQ(level.scoring.rows(), 3u);
    EXPECT_EQ(level.scoring.cols(), 1u);
    EXPECT_EQ(level.encoder.rows(), 3u);
    EXPECT_EQ(level.encoder.cols(), 4u);
    EXPECT_EQ(level.decoder.rows(), 4u);
    EXPECT_EQ(level.decoder.cols(), 3u);
    const double limit = std::sqrt(6.0 / 7.0);
    for (double v : level.encoder.values()) EXPECT_LE(std::abs(v), limit);
  }
  EXPECT_EQ(p.tensors().size(), 6u);
  EXPECT_EQ(*model_for(3, c, 9).tensors()[4], *p.tensors()[4]);
  EXPECT_NE(*model_for(3, c, 10).tensors()[4], *p.tensors()[4]);
}

TEST(Forward, LevelSizesHalve) {
  std::mt19937_64 rng(51);
  const Graph g = testing::random_graph(8, 3, 0.5, rng);
  const TrainConfig c = small_config(2);
  Tape t;
  const ForwardResult r = forward_pass(t, g, bind(t, model_for(3, c, 1), false), c);
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_EQ(r.levels[0].size(), 4u);
  EXPECT_EQ(r.levels[1].size(), 2u);
  EXPECT_EQ(r.structures[0], g.adjacency());
  EXPECT_EQ(r.coarse_features[1].rows(), 2u);
  EXPECT_EQ(r.coarse_features[1].cols(), 3u);
  EXPECT_NEAR(r.loss.value()(0, 0), r.level_losses[0].value()(0, 0) + r.level_losses[1].value()(0, 0),
              1e-14);
}

TEST(Forward, SingleNodeLossIsCostMinusGamma) {
  const Graph g(SparseMatrix(1, 1), Matrix{{0.3, 0.9, 0.1}});
  for (double gamma : {0.5, 2.0}) {
    TrainConfig c = small_config(1);
    c.gamma = gamma;
    Tape t;
    const ForwardResult r = forward_pass(t, g, bind(t, model_for(3, c, 2), false), c);
    EXPECT_EQ(r.levels[0].coarsening.value(), (Matrix{{1}}));
    const Matrix& xc = r.coarse_features[0].value();
    double m = 0.0;
    for (std::size_t j = 0; j < 3; ++j) m += (g.features()(0, j) - xc(0, j)) * (g.features()(0, j) - xc(0, j));
    EXPECT_NEAR(r.loss.value()(0, 0), m - gamma, 1e-12);
  }
}

TEST(Forward, LossIsBoundedBelowByEntropy) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(4 + rng() % 20, 3, 0.3, rng);
    TrainConfig c = small_config(1 + int(rng() % 3));
    c.gamma = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    Tape t;
    const ForwardResult r = forward_pass(t, g, bind(t, model_for(3, c, rng()), false), c);
    double bound = 0.0;
    std::size_t n = g.num_nodes();
    for (const CoarseningLevel& level : r.levels) {
      bound -= c.gamma * (std::log(double(n * level.size())) + 1.0);
      n = level.size();
    }
    EXPECT_TRUE(std::isfinite(r.loss.value()(0, 0)));
    EXPECT_GE(r.loss.value()(0, 0), bound - 1e-9);
  }
}

TEST(Forward, LossAndGradientAgreeWithLossValue) {
  std::mt19937_64 rng(53);
  const Graph g = testing::random_graph(7, 3, 0.5, rng);
  const TrainConfig c = small_config(2);
  const ModelParams p = model_for(3, c, 4);
  const LossAndGradient lg = loss_and_gradient(g, p, c);
  EXPECT_EQ(lg.loss, loss_value(g, p, c));
  ASSERT_EQ(lg.gradients.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(lg.gradients[i].rows(), p.tensors()[i]->rows());
    EXPECT_EQ(lg.gradients[i].cols(), p.tensors()[i]->cols());
  }
}

TEST(Forward, FullGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 3; ++trial) {
    const Graph g = testing::random_graph(5, 2, 0.5, rng);
    TrainConfig c = small_config(1 + trial % 2);
    c.hidden = 3;
    c.steps = 3;
    ModelParams p = model_for(2, c, rng());
    const LossAndGradient lg = loss_and_gradient(g, p, c);
    const double h = 1e-5;
    double worst = 0.0;
    std::vector<Matrix*> tensors = p.tensors();
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      for (std::size_t i = 0; i < tensors[k]->size(); ++i) {
        const double saved = (*tensors[k])[i];
        (*tensors[k])[i] = saved + h;
        const double up = loss_value(g, p, c);
        (*tensors[k])[i] = saved - h;
        const double down = loss_value(g, p, c);
        (*tensors[k])[i] = saved;
        const double analytic = lg.gradients[k][i];
        worst = std::max(worst, std::abs(analytic - (up - down) / (2 * h)) / std::max(1.0, std::abs(analytic)));
      }
    }
    EXPECT_LE(worst, 1e-4);
  }
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Matrix w{{1, -2}, {3, 4}};
  const Matrix before = w;
  std::vector<Matrix*> params{&w};
  AdamState s = make_adam_state(std::vector<const Matrix*>{&w}, 0.1);
  const std::vector<Matrix> g{Matrix(2, 2)};
  for (int i = 0; i < 3; ++i) adam_step(params, g, s);
  EXPECT_EQ(w, before);
}

TEST(Adam, FirstStepIsLearningRate) {
  Matrix w{{0.0}};
  std::vector<Matrix*> params{&w};
  AdamState s = make_adam_state(std::vector<const Matrix*>{&w}, 0.1);
  adam_step(params, std::vector<Matrix>{Matrix{{1.0}}}, s);
  EXPECT_NEAR(w(0, 0), -0.1 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(s.step, 1);
}

TEST(Adam, ShapeMismatchIsContractError) {
  Matrix w(2, 2);
  std::vector<Matrix*> params{&w};
  AdamState s = make_adam_state(std::vector<const Matrix*>{&w}, 0.1);
  EXPECT_THROW(adam_step(params, std::vector<Matrix>{Matrix(2, 1)}, s), ContractError);
}

TEST(LearningRate, HalvesEveryFiftyEpochs) {
  EXPECT_EQ(learning_rate_at(0, 0.01), 0.01);
  EXPECT_EQ(learning_rate_at(49, 0.01), 0.01);
  EXPECT_EQ(learning_rate_at(50, 0.01), 0.005);
  EXPECT_EQ(learning_rate_at(150, 0.01), 0.00125);
}

TEST(TrainUnsupervised, OneEpochOnTwoGraphs) {
  std::vector<Graph> graphs = unlabeled_corpus(2, 61);
  TrainConfig c = small_config();
  c.max_epochs = 1;
  const UnsupervisedResult r = train_unsupervised(graphs, c);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_TRUE(std::isfinite(r.history[0].train_loss));
  EXPECT_TRUE(std::isfinite(r.history[0].validation_loss));
}

TEST(TrainUnsupervised, Errors) {
  EXPECT_THROW(train_unsupervised({}, small_config()), ContractError);
  const std::vector<Graph> labeled = labeled_corpus(4, 62);
  EXPECT_THROW(train_unsupervised(labeled, small_config()), ContractError);
}

TEST(TrainUnsupervised, HistorySnapshotAndDeterminism) {
  const std::vector<Graph> graphs = unlabeled_corpus(12, 63);
  TrainConfig c = small_config();
  c.max_epochs = 12;
  c.decay_every = 5;
  const UnsupervisedResult a = train_unsupervised(graphs, c);
  ASSERT_EQ(a.history.size(), 12u);
  double best = a.history[0].validation_loss;
  int best_epoch = 0;
  for (const EpochRecord& e : a.history) {
    EXPECT_EQ(e.learning_rate, learning_rate_at(e.epoch, c.lr, c.lr_decay, c.decay_every));
    if (e.validation_loss < best) {
      best = e.validation_loss;
      best_epoch = e.epoch;
    }
  }
  // Epoch −1 stands for the initial parameters.
  if (a.best_epoch == -1) {
    EXPECT_LE(a.best_validation_loss, best);
  } else {
    EXPECT_EQ(a.best_epoch, best_epoch);
    EXPECT_EQ(a.best_validation_loss, best);
  }

  c.jobs = 2;
  const UnsupervisedResult b = train_unsupervised(graphs, c);
  ASSERT_EQ(b.history.size(), a.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].validation_loss, b.history[i].validation_loss);
  }
  for (std::size_t i = 0; i < a.params.tensors().size(); ++i) {
    EXPECT_EQ(*a.params.tensors()[i], *b.params.tensors()[i]);
  }
}

TEST(TrainUnsupervised, TrainingLowersTheLoss) {
  const std::vector<Graph> graphs = unlabeled_corpus(10, 64);
  TrainConfig c = small_config();
  c.max_epochs = 60;
  c.lr = 0.05;
  const UnsupervisedResult r = train_unsupervised(graphs, c);
  EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
}

TEST(Readout, Examples) {
  EXPECT_EQ(readout(std::vector<Matrix>{Matrix{{1, 2}, {3, 4}}}), (std::vector<double>{3, 4, 2, 3}));
  EXPECT_EQ(readout(std::vector<Matrix>{Matrix{{1, 2}, {3, 4}}, Matrix{{1, 2}, {3, 4}}}),
            (std::vector<double>{3, 4, 2, 3, 3, 4, 2, 3}));
  EXPECT_EQ(readout(std::vector<Matrix>{Matrix{{5, 6}}}), (std::vector<double>{5, 6, 5, 6}));
  EXPECT_THROW(readout(std::vector<Matrix>{}), ContractError);
  EXPECT_THROW(readout(std::vector<Matrix>{Matrix(0, 2)}), ContractError);
}

TEST(Readout, ExtractFeaturesShape) {
  const std::vector<Graph> graphs = unlabeled_corpus(5, 65);
  const TrainConfig c = small_config(2);
  const ModelParams p = model_for(3, c, 5);
  const Matrix f = extract_features(graphs, p, c);
  EXPECT_EQ(f.rows(), 5u);
  EXPECT_EQ(f.cols(), 2u * 4u * 2u);
  const std::vector<double> row = readout(coarse_embeddings(graphs[3], p, c));
  for (std::size_t j = 0; j < row.size(); ++j) EXPECT_EQ(f(3, j), row[j]);
}

TEST(Classifier, SeparableClassesAreLearned) {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> noise(0.0, 0.3);
  Matrix train(80, 3), test(40, 3);
  std::vector<int> train_y, test_y;
  auto fill = [&](Matrix& m, std::vector<int>& y) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const int label = int(i % 2);
      y.push_back(label);
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = (label ? 2.0 : -2.0) + noise(rng);
    }
  };
  fill(train, train_y);
  fill(test, test_y);
  ClassifierConfig cfg;
  const ClassifierParams p = train_classifier(train, train_y, 2, cfg, 1);
  EXPECT_EQ(accuracy(predict(p, test), test_y), 1.0);
}

TEST(Classifier, ShuffledLabelsStayNearChance) {
  // One 200-sample run has a standard deviation near 0.035, so the average of
  // ten independent runs is checked.
  double total = 0.0;
  for (std::uint64_t seed = 70; seed < 80; ++seed) {
    std::mt19937_64 rng(seed);
    const Matrix x = random_matrix(200, 4, rng);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = int(i % 2);
    std::shuffle(y.begin(), y.end(), rng);
    const CvReport r = classifier_cross_validate(x, y, split_folds(y, 5, 3), 5, ClassifierConfig{}, 4);
    EXPECT_NEAR(r.mean, 0.5, 0.15);
    total += r.mean;
  }
  EXPECT_NEAR(total / 10.0, 0.5, 0.1);
}

TEST(Classifier, ConstantFeaturesPredictMajority) {
  const Matrix x(30, 2, 1.5);
  std::vector<int> y(30, 0);
  for (std::size_t i = 0; i < 9; ++i) y[i] = 1;
  const ClassifierParams p = train_classifier(x, y, 2, ClassifierConfig{}, 5);
  const std::vector<int> predicted = predict(p, x);
  EXPECT_EQ(accuracy(predicted, y), 21.0 / 30.0);
}

TEST(Classifier, SingleClassIsRejected) {
  const std::vector<int> y(6, 1);
  EXPECT_THROW(train_classifier(Matrix(6, 2, 1.0), y, 2, ClassifierConfig{}, 0), ContractError);
}

TEST(Classifier, SummarizeUsesPopulationStd) {
  const CvReport r = summarize({0.5, 1.0});
  EXPECT_EQ(r.mean, 0.75);
  EXPECT_EQ(r.stddev, 0.25);
}

TEST(Classifier, GatherRows) {
  const Matrix m{{1, 2}, {3, 4}, {5, 6}};
  const std::vector<std::size_t> rows{2, 0};
  EXPECT_EQ(gather_rows(m, rows), (Matrix{{5, 6}, {1, 2}}));
}

TEST(CrossValidate, DeterministicAndSized) {
  const std::vector<Graph> graphs = labeled_corpus(12, 81);
  TrainConfig c = small_config();
  c.max_epochs = 3;
  const CvReport a = cross_validate(graphs, c, 3);
  const CvReport b = cross_validate(graphs, c, 3);
  EXPECT_EQ(a.fold_accuracy.size(), 3u);
  EXPECT_EQ(a.fold_accuracy, b.fold_accuracy);
  EXPECT_EQ(a.mean, b.mean);
  for (double v : a.fold_accuracy) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(CrossValidate, Errors) {
  const std::vector<Graph> graphs = labeled_corpus(4, 82);
  EXPECT_THROW(cross_validate(graphs, small_config(), 5), ContractError);
  const std::vector<Graph> unlabeled = unlabeled_corpus(6, 83);
  EXPECT_THROW(cross_validate(unlabeled, small_config(), 3), ContractError);
}

TEST(GridSearch, PicksHighestMean) {
  const std::vector<Graph> graphs = labeled_corpus(9, 84);
  TrainConfig c = small_config();
  c.max_epochs = 2;
  const std::vector<int> levels{1, 2};
  const std::vector<double> lrs{0.01};
  const GridResult g = grid_search(graphs, c, levels, lrs, 3);
  ASSERT_EQ(g.points.size(), 2u);
  for (const GridPoint& p : g.points) EXPECT_LE(p.report.mean, g.points[g.best].report.mean);
  EXPECT_EQ(strip_labels(graphs)[0].label(), std::nullopt);
}

TEST(Checkpoint, RoundTrip) {
  Checkpoint ck;
  ck.dataset = "MUTAG";
  ck.subsample = 0.25;
  ck.features.mode = FeatureMode::degree_one_hot;
  ck.features.max_degree = 7;
  ck.config = small_config(2);
  ck.config.gamma = 0.37;
  ck.config.init_gain = 3.5;
  ck.config.decoder_activation = Activation::identity;
  ck.params = model_for(5, ck.config, 11);
  const std::string text = checkpoint_to_json(ck);
  const Checkpoint back = checkpoint_from_json(text);
  EXPECT_EQ(back.dataset, "MUTAG");
  EXPECT_EQ(back.subsample, 0.25);
  EXPECT_EQ(back.features.mode, FeatureMode::degree_one_hot);
  EXPECT_EQ(back.features.max_degree, 7u);
  EXPECT_EQ(back.config.gamma, 0.37);
  EXPECT_EQ(back.config.init_gain, 3.5);
  EXPECT_EQ(back.config.seed, ck.config.seed);
  EXPECT_EQ(back.config.decoder_activation, Activation::identity);
  ASSERT_EQ(back.params.tensors().size(), ck.params.tensors().size());
  for (std::size_t i = 0; i < ck.params.tensors().size(); ++i) {
    EXPECT_EQ(*back.params.tensors()[i], *ck.params.tensors()[i]);
  }
  EXPECT_EQ(checkpoint_to_json(back), text);

  const auto path = std::filesystem::temp_directory_path() / "otc_checkpoint_roundtrip.json";
  save_checkpoint(path, ck);
  EXPECT_EQ(checkpoint_to_json(load_checkpoint(path)), text);
  std::filesystem::remove(path);
}

TEST(Checkpoint, Errors) {
  EXPECT_THROW(checkpoint_from_json("{"), FormatError);
  EXPECT_THROW(checkpoint_from_json(R"({"version": "other/9"})"), FormatError);
  Checkpoint ck;
  ck.config = small_config();
  ck.params = model_for(2, ck.config, 1);
  std::string text = checkpoint_to_json(ck);
  text.replace(text.find("\"feature-dim\": 2"), 16, "\"feature-dim\": 3");
  EXPECT_THROW(checkpoint_from_json(text), FormatError);
  EXPECT_THROW(load_checkpoint("/nonexistent/otc.json"), FileError);
}

}  // namespace
}  // namespace otc
