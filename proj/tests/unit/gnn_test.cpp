#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "otc/error.hpp"
#include "otc/gnn.hpp"
#include "otc/graph/graph.hpp"
#include "otc/tensor/finite_diff.hpp"
#include "otc/tensor/ops.hpp"

namespace otc {
namespace {

using testing::random_matrix;

TEST(Activation, NamesRoundTrip) {
  for (Activation a : {Activation::sigmoid, Activation::sigmoid_square, Activation::identity}) {
    EXPECT_EQ(activation_from_string(to_string(a)), a);
  }
  EXPECT_THROW(activation_from_string("tanh"), ContractError);
}

TEST(Gcn, IsolatedNodeSigmoid) {
  Tape t;
  Var out = gcn_forward(t.constant(Matrix(1, 1)), t.constant({{1}}), {t.constant({{1}})});
  EXPECT_NEAR(out.value()(0, 0), 0.7310585786300049, 1e-15);
}

TEST(Gcn, ZeroWeightGivesHalf) {
  std::mt19937_64 rng(41);
  const Graph g = testing::random_graph(5, 3, 0.5, rng);
  Tape t;
  Var out = gcn_forward(t.constant(g.adjacency().to_dense()), t.constant(g.features()),
                        {t.constant(Matrix(3, 4))});
  EXPECT_EQ(out.rows(), 5u);
  EXPECT_EQ(out.cols(), 4u);
  for (double v : out.value().values()) EXPECT_EQ(v, 0.5);
}

TEST(Gcn, IdentityActivationReturnsNormalizedAdjacency) {
  Tape t;
  Var out = gcn_forward(t.constant(testing::path_graph(2).to_dense()), t.constant(Matrix::identity(2)),
                        {t.constant(Matrix::identity(2)), Activation::identity});
  for (double v : out.value().values()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Gcn, ShapeMismatchIsDimensionError) {
  Tape t;
  EXPECT_THROW(gcn_forward(t.constant(Matrix(2, 2)), t.constant(Matrix(2, 3)), {t.constant(Matrix(2, 1))}),
               DimensionError);
}

TEST(EncodeDecode, CoarseEmbeddingsPoolWithS) {
  std::mt19937_64 rng(42);
  Tape t;
  const Matrix x = random_matrix(3, 2, rng);
  const Matrix s(3, 2, 0.5);
  Var a = t.constant(testing::complete_graph(3).to_dense());
  Var sv = t.constant(s);
  LevelGnn params{{t.constant(Matrix(2, 1))},
                  {t.constant(random_matrix(2, 4, rng))},
                  {t.constant(random_matrix(4, 2, rng))}};
  const EncodeDecode out = encode_decode(a, t.constant(x), sv, matmul(transpose(sv), matmul(a, sv)), params);
  const Matrix& z = out.embeddings.value();
  const Matrix& zc = out.coarse_embeddings.value();
  ASSERT_EQ(zc.rows(), 2u);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t c = 0; c < 4; ++c)
      EXPECT_NEAR(zc(j, c), 0.5 * (z(0, c) + z(1, c) + z(2, c)), 1e-14);
  EXPECT_EQ(out.coarse_features.rows(), 2u);
  EXPECT_EQ(out.coarse_features.cols(), 2u);
}

TEST(EncodeDecode, ZeroDecoderGivesHalf) {
  std::mt19937_64 rng(43);
  Tape t;
  Var a = t.constant(testing::path_graph(4).to_dense());
  Var s = t.constant(Matrix{{1, 0}, {0.5, 0.5}, {0, 1}, {0, 1}});
  LevelGnn params{{t.constant(Matrix(3, 1))},
                  {t.constant(random_matrix(3, 5, rng))},
                  {t.constant(Matrix(5, 3))}};
  const EncodeDecode out =
      encode_decode(a, t.constant(random_matrix(4, 3, rng)), s, matmul(transpose(s), matmul(a, s)), params);
  EXPECT_EQ(out.coarse_features.value(), Matrix(2, 3, 0.5));
}

TEST(EncodeDecode, NormalizedVariantAgrees) {
  std::mt19937_64 rng(44);
  const Graph g = testing::random_graph(6, 3, 0.5, rng);
  Tape t;
  Var a = t.constant(g.adjacency().to_dense());
  Var s = t.constant(random_matrix(6, 3, rng, 0.0, 1.0));
  Var ac = matmul(transpose(s), matmul(a, s));
  LevelGnn params{{t.constant(Matrix(3, 1))},
                  {t.constant(random_matrix(3, 4, rng))},
                  {t.constant(random_matrix(4, 3, rng))}};
  const EncodeDecode x = encode_decode(a, t.constant(g.features()), s, ac, params);
  const EncodeDecode y = encode_decode_normalized(normalized_adjacency(a), t.constant(g.features()), s,
                                                  normalized_adjacency(ac), params);
  EXPECT_EQ(x.coarse_features.value(), y.coarse_features.value());
}

TEST(Gcn, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(45);
  const Graph g = testing::random_graph(6, 3, 0.5, rng);
  const std::vector<Matrix> params{g.features(), random_matrix(3, 4, rng)};
  for (Activation act : {Activation::sigmoid, Activation::sigmoid_square, Activation::identity}) {
    ScalarFunction f = [&](Tape& t, std::span<const Var> p) {
      return sum(square(gcn_forward(t.constant(g.adjacency().to_dense()), p[0], {p[1], act})));
    };
    EXPECT_LE(finite_diff_check(f, params).max_relative_error, 1e-6) << to_string(act);
  }
}

TEST(EncodeDecode, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(46);
  const Graph g = testing::random_graph(5, 2, 0.6, rng);
  const std::vector<Matrix> params{random_matrix(5, 2, rng, 0.0, 1.0), random_matrix(2, 3, rng),
                                   random_matrix(3, 2, rng)};
  ScalarFunction f = [&](Tape& t, std::span<const Var> p) {
    Var a = t.constant(g.adjacency().to_dense());
    Var s = row_normalize_l1(p[0]);
    LevelGnn level{{t.constant(Matrix(2, 1))}, {p[1]}, {p[2]}};
    const EncodeDecode out =
        encode_decode(a, t.constant(g.features()), s, matmul(transpose(s), matmul(a, s)), level);
    return add(sum(out.coarse_features), sum(square(out.coarse_embeddings)));
  };
  EXPECT_LE(finite_diff_check(f, params).max_relative_error, 1e-6);
}

}  // namespace
}  // namespace otc
