#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "otc/data/features.hpp"
#include "otc/data/folds.hpp"
#include "otc/data/tu_dataset.hpp"
#include "otc/error.hpp"
#include "otc/graph/graph.hpp"
#include "tu_writer.hpp"

#ifndef OTC_TEST_DATA_DIR
#error "OTC_TEST_DATA_DIR must point at the bundled datasets"
#endif

namespace otc {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("otc_data_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  void write(const std::string& file, const std::string& text) const {
    std::ofstream(path_ / file) << text;
  }

 private:
  fs::path path_;
};

TEST(TuDataset, MinimalSingleEdge) {
  TempDir dir;
  dir.write("T_A.txt", "1, 2\n2, 1\n");
  dir.write("T_graph_indicator.txt", "1\n1\n");
  dir.write("T_graph_labels.txt", "1\n");
  const TuDatasetRaw raw = parse_tu_dataset(dir.path(), "T");
  EXPECT_EQ(raw.num_graphs(), 1u);
  EXPECT_EQ(raw.num_nodes(), 2u);
  EXPECT_FALSE(raw.node_labels);
  const std::vector<Graph> graphs = build_features(raw, default_feature_spec(raw));
  ASSERT_EQ(graphs.size(), 1u);
  EXPECT_EQ(graphs[0].num_nodes(), 2u);
  EXPECT_EQ(graphs[0].adjacency().nnz(), 2u);
  EXPECT_EQ(total_edge_weight(graphs[0].adjacency()), 2.0);
  EXPECT_EQ(graphs[0].label(), 0);
}

TEST(TuDataset, IndicatorBeyondLabelsIsFormatError) {
  TempDir dir;
  dir.write("T_A.txt", "1, 2\n2, 1\n");
  dir.write("T_graph_indicator.txt", "1\n3\n");
  dir.write("T_graph_labels.txt", "1\n2\n");
  try {
    parse_tu_dataset(dir.path(), "T");
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("T_graph_indicator.txt:2"), std::string::npos) << e.what();
  }
}

TEST(TuDataset, MalformedEdgeIsFormatError) {
  TempDir dir;
  dir.write("T_A.txt", "1, x\n");
  dir.write("T_graph_indicator.txt", "1\n1\n");
  dir.write("T_graph_labels.txt", "1\n");
  EXPECT_THROW(parse_tu_dataset(dir.path(), "T"), FormatError);
}

TEST(TuDataset, MissingFileNamesIt) {
  TempDir dir;
  dir.write("T_A.txt", "");
  try {
    parse_tu_dataset(dir.path(), "T");
    FAIL() << "expected a file error";
  } catch (const FileError& e) {
    EXPECT_NE(std::string(e.what()).find("T_graph_indicator.txt"), std::string::npos) << e.what();
  }
}

TEST(TuDataset, Mutag) {
  const TuDatasetRaw raw = parse_tu_dataset(fs::path(OTC_TEST_DATA_DIR) / "MUTAG", "MUTAG");
  EXPECT_EQ(raw.num_graphs(), 188u);
  EXPECT_EQ(std::set<int>(raw.graph_labels.begin(), raw.graph_labels.end()).size(), 2u);
  EXPECT_NEAR(double(raw.num_nodes()) / double(raw.num_graphs()), 17.93, 0.005);
  const FeatureSpec spec = default_feature_spec(raw);
  EXPECT_EQ(spec.mode, FeatureMode::node_label_one_hot);
  const std::vector<Graph> graphs = build_features(raw, spec);
  EXPECT_EQ(graphs.size(), 188u);
  EXPECT_EQ(graphs[0].feature_dim(), 7u);
  const std::vector<int> labels = graph_labels(graphs);
  EXPECT_EQ(std::count(labels.begin(), labels.end(), 1), 125);
}

TEST(Features, NodeLabelOneHot) {
  TempDir dir;
  dir.write("T_A.txt", "1, 2\n2, 1\n2, 3\n3, 2\n");
  dir.write("T_graph_indicator.txt", "1\n1\n1\n");
  dir.write("T_graph_labels.txt", "-1\n");
  dir.write("T_node_labels.txt", "0\n1\n2\n");
  const std::vector<Graph> graphs = build_features(parse_tu_dataset(dir.path(), "T"), FeatureSpec{});
  EXPECT_EQ(graphs[0].features(), (Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Features, DegreeOneHotCaps) {
  TempDir dir;
  std::string a, ind = "1\n";
  for (int leaf = 2; leaf <= 100; ++leaf) {
    a += "1, " + std::to_string(leaf) + "\n" + std::to_string(leaf) + ", 1\n";
    ind += "1\n";
  }
  a += "2, 3\n3, 2\n2, 4\n4, 2\n";
  dir.write("T_A.txt", a);
  dir.write("T_graph_indicator.txt", ind);
  dir.write("T_graph_labels.txt", "1\n");
  FeatureSpec spec;
  spec.mode = FeatureMode::degree_one_hot;
  const Graph g = build_features(parse_tu_dataset(dir.path(), "T"), spec)[0];
  ASSERT_EQ(g.feature_dim(), 11u);
  EXPECT_EQ(g.features()(0, 10), 1.0);  // degree 99
  EXPECT_EQ(g.features()(1, 3), 1.0);   // degree 3
  EXPECT_EQ(g.features()(4, 1), 1.0);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 11; ++j) row += g.features()(i, j);
    EXPECT_EQ(row, 1.0);
  }
}

TEST(Features, AttributesAreStandardized) {
  TempDir dir;
  dir.write("T_A.txt", "1, 2\n2, 1\n");
  dir.write("T_graph_indicator.txt", "1\n1\n2\n2\n");
  dir.write("T_graph_labels.txt", "1\n2\n");
  dir.write("T_node_attributes.txt", "1.0, 5\n3.0, 5\n5.0, 5\n7.0, 5\n");
  const TuDatasetRaw raw = parse_tu_dataset(dir.path(), "T");
  FeatureSpec spec;
  spec.mode = FeatureMode::node_attributes;
  const std::vector<Graph> graphs = build_features(raw, spec);
  const double s = std::sqrt(5.0);
  EXPECT_NEAR(graphs[0].features()(0, 0), -3.0 / s, 1e-12);
  EXPECT_NEAR(graphs[1].features()(1, 0), 3.0 / s, 1e-12);
  EXPECT_EQ(graphs[1].features()(0, 1), 0.0);
  spec.standardize_attributes = false;
  EXPECT_EQ(build_features(raw, spec)[1].features()(1, 0), 7.0);
}

TEST(Features, MissingModeDataIsContractError) {
  TempDir dir;
  dir.write("T_A.txt", "1, 2\n2, 1\n");
  dir.write("T_graph_indicator.txt", "1\n1\n");
  dir.write("T_graph_labels.txt", "1\n");
  const TuDatasetRaw raw = parse_tu_dataset(dir.path(), "T");
  EXPECT_EQ(default_feature_spec(raw).mode, FeatureMode::degree_one_hot);
  for (FeatureMode mode : {FeatureMode::node_label_one_hot, FeatureMode::node_attributes}) {
    FeatureSpec spec;
    spec.mode = mode;
    EXPECT_THROW(build_features(raw, spec), ContractError);
  }
}

TEST(Features, ModeNamesRoundTrip) {
  for (FeatureMode m :
       {FeatureMode::node_label_one_hot, FeatureMode::node_attributes, FeatureMode::degree_one_hot}) {
    EXPECT_EQ(feature_mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(feature_mode_from_string("spectral"), ContractError);
}

TEST(Features, WriterRoundTrip) {
  TempDir dir;
  const auto graphs = testing::random_tu_graphs(6, 3, 5);
  const fs::path path = testing::write_tu_dataset(dir.path(), "W", graphs);
  const std::vector<Graph> built = build_features(parse_tu_dataset(path, "W"), FeatureSpec{});
  ASSERT_EQ(built.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(built[i].num_nodes(), graphs[i].nodes);
    EXPECT_EQ(built[i].adjacency().nnz(), 2 * graphs[i].edges.size());
    EXPECT_EQ(built[i].label(), graphs[i].label - 1);
  }
}

std::vector<int> balanced_labels(std::size_t n) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = int(i % 2);
  return y;
}

TEST(Folds, HundredBalancedGraphs) {
  const std::vector<int> y = balanced_labels(100);
  const std::vector<std::size_t> fold = split_folds(y, 10, 7);
  std::map<std::size_t, std::array<int, 2>> counts;
  for (std::size_t i = 0; i < 100; ++i) ++counts[fold[i]][y[i]];
  ASSERT_EQ(counts.size(), 10u);
  for (const auto& [f, c] : counts) {
    EXPECT_EQ(c[0], 5) << "fold " << f;
    EXPECT_EQ(c[1], 5) << "fold " << f;
  }
  EXPECT_EQ(split_folds(y, 10, 7), fold);
  EXPECT_NE(split_folds(y, 10, 8), fold);
}

TEST(Folds, HundredAndOneGraphs) {
  const std::vector<std::size_t> fold = split_folds(balanced_labels(101), 10, 1);
  std::vector<int> sizes(10, 0);
  for (std::size_t f : fold) ++sizes[f];
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<int>{10, 10, 10, 10, 10, 10, 10, 10, 10, 11}));
}

TEST(Folds, SkewedClassesStaySpread) {
  std::vector<int> y(57, 0);
  for (std::size_t i = 0; i < 13; ++i) y[i * 4] = 1;
  const std::vector<std::size_t> fold = split_folds(y, 5, 2);
  std::vector<int> sizes(5, 0), positives(5, 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    ++sizes[fold[i]];
    positives[fold[i]] += y[i];
  }
  EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
  EXPECT_LE(*std::max_element(positives.begin(), positives.end()) -
                *std::min_element(positives.begin(), positives.end()),
            1);
}

TEST(Folds, FewerSamplesThanFoldsIsContractError) {
  EXPECT_THROW(split_folds(balanced_labels(9), 10, 0), ContractError);
}

TEST(Subsample, SizeOrderAndStrata) {
  const std::vector<int> y = balanced_labels(188);
  const std::vector<std::size_t> keep = stratified_subsample(y, 0.1, 4);
  EXPECT_EQ(keep.size(), 19u);
  EXPECT_TRUE(std::is_sorted(keep.begin(), keep.end()));
  int ones = 0;
  for (std::size_t i : keep) ones += y[i];
  EXPECT_NEAR(ones, 9.5, 1.0);
  EXPECT_EQ(stratified_subsample(y, 0.01, 4, 10).size(), 10u);
  EXPECT_EQ(stratified_subsample(y, 0.1, 4), keep);
  EXPECT_THROW(stratified_subsample(y, 0.0, 4), ContractError);
}

}  // namespace
}  // namespace otc
