#include "otc/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "otc/cli/dot.hpp"
#include "otc/cli/json_config.hpp"
#include "otc/data/features.hpp"
#include "otc/data/folds.hpp"
#include "otc/data/tu_dataset.hpp"
#include "otc/error.hpp"
#include "otc/parallel.hpp"
#include "otc/train/checkpoint.hpp"
#include "otc/train/classifier.hpp"
#include "otc/train/cross_validate.hpp"
#include "otc/train/readout.hpp"
#include "otc/train/unsupervised.hpp"

namespace otc::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Invalid flag values discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetOptions {
  std::string dataset;
  std::string data_dir = "data";
  std::string features = "auto";
  std::size_t max_degree = 10;
  double subsample = 1.0;
};

struct Dataset {
  std::string name;
  FeatureSpec spec;
  std::vector<Graph> graphs;
};

struct Options {
  DatasetOptions data;
  TrainConfig config;
  std::string encoder_activation = "sigmoid";
  std::string decoder_activation = "sigmoid";
  std::size_t folds = 10;
  std::string train_protocol = "frozen";
  std::string sweep_protocol = "per-fold";
  std::string out = ".";
  std::string checkpoint;
  std::string metrics;
  std::vector<double> gammas;
  std::vector<int> ks;
  std::size_t graph = 0;
  std::optional<std::uint64_t> seed_override;
};

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Dataset load_dataset(const DatasetOptions& opt, std::uint64_t seed, std::size_t min_graphs) {
  fs::path dir = opt.dataset;
  if (!fs::is_directory(dir)) dir = fs::path(opt.data_dir) / opt.dataset;
  if (!fs::is_directory(dir)) throw FileError("dataset directory not found: " + dir.string());
  Dataset d;
  d.name = dir.filename().string();
  if (d.name.empty()) d.name = dir.parent_path().filename().string();

  const TuDatasetRaw raw = parse_tu_dataset(dir, d.name);
  d.spec = default_feature_spec(raw);
  if (opt.features != "auto") d.spec.mode = feature_mode_from_string(opt.features);
  d.spec.max_degree = opt.max_degree;
  std::vector<Graph> graphs = build_features(raw, d.spec);

  if (opt.subsample < 1.0) {
    const std::vector<int> labels = graph_labels(graphs);
    for (std::size_t i : stratified_subsample(labels, opt.subsample, seed, min_graphs)) {
      d.graphs.push_back(std::move(graphs[i]));
    }
  } else {
    d.graphs = std::move(graphs);
  }
  return d;
}

void add_dataset_flags(CLI::App* cmd, DatasetOptions& d, bool required) {
  auto* ds = cmd->add_option("--dataset", d.dataset,
                             "TU dataset name under --data-dir, or a dataset directory");
  if (required) ds->required();
  cmd->add_option("--data-dir", d.data_dir, "Directory holding TU dataset folders")
      ->capture_default_str();
}

void add_feature_flags(CLI::App* cmd, DatasetOptions& d) {
  cmd->add_option("--features", d.features, "Node features")
      ->check(CLI::IsMember({"auto", "node-label-one-hot", "node-attributes", "degree-one-hot"}))
      ->capture_default_str();
  cmd->add_option("--max-degree", d.max_degree, "Degree one-hot cap")->capture_default_str();
  cmd->add_option("--subsample", d.subsample, "Stratified fraction of graphs to use")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

void add_train_flags(CLI::App* cmd, Options& o) {
  TrainConfig& c = o.config;
  cmd->add_option("--gamma", c.gamma, "Entropic regularization")->capture_default_str();
  cmd->add_option("--k", c.steps, "Sinkhorn rounds")->capture_default_str();
  cmd->add_option("--p", c.p, "Cost exponent")->capture_default_str();
  cmd->add_option("--ratio", c.ratio, "Coarsening ratio")->capture_default_str();
  cmd->add_option("--levels", c.levels, "Coarsening levels")->capture_default_str();
  cmd->add_option("--hidden", c.hidden, "GCN embedding width")->capture_default_str();
  cmd->add_option("--init-gain", c.init_gain, "Glorot gain of encoder/decoder weights")
      ->capture_default_str();
  cmd->add_option("--lr", c.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--max-epochs,--epochs", c.max_epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr-decay", c.lr_decay, "Learning-rate decay factor")->capture_default_str();
  cmd->add_option("--decay-every", c.decay_every, "Epochs between decays")->capture_default_str();
  cmd->add_option("--val-fraction", c.validation_fraction, "Held-out fraction for selection")
      ->capture_default_str();
  cmd->add_option("--encoder-activation", o.encoder_activation)
      ->check(CLI::IsMember({"sigmoid", "sigmoid_square", "identity"}))
      ->capture_default_str();
  cmd->add_option("--decoder-activation", o.decoder_activation)
      ->check(CLI::IsMember({"sigmoid", "sigmoid_square", "identity"}))
      ->capture_default_str();
  cmd->add_option("--classifier-hidden", c.classifier.hidden)->capture_default_str();
  cmd->add_option("--classifier-epochs", c.classifier.epochs)->capture_default_str();
  cmd->add_option("--classifier-lr", c.classifier.lr)->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
}

void finalize_config(Options& o) {
  o.config.encoder_activation = activation_from_string(o.encoder_activation);
  o.config.decoder_activation = activation_from_string(o.decoder_activation);
  try {
    o.config.validate();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  if (o.folds < 2) throw UsageError("--folds must be at least 2");
}

CvReport evaluate(const std::vector<Graph>& graphs, const ModelParams& params,
                  const TrainConfig& config, std::size_t folds) {
  const std::vector<int> labels = graph_labels(graphs);
  const std::vector<Graph> unlabeled = strip_labels(graphs);
  const Matrix features = extract_features(unlabeled, params, config);
  const std::vector<std::size_t> fold_of = split_folds(labels, folds, config.seed);
  return classifier_cross_validate(features, labels, fold_of, folds, config.classifier,
                                   config.seed);
}

CvReport run_protocol(const std::string& protocol, const std::vector<Graph>& graphs,
                      const TrainConfig& config, std::size_t folds) {
  if (protocol == "per-fold") return cross_validate(graphs, config, folds);
  const UnsupervisedResult model = train_unsupervised(strip_labels(graphs), config);
  return evaluate(graphs, model.params, config, folds);
}

Json report_json(const CvReport& r) {
  return Json{{"folds", r.fold_accuracy.size()},
              {"fold_accuracy", r.fold_accuracy},
              {"mean", r.mean},
              {"std", r.stddev}};
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileError("cannot write " + path.string());
  f << text;
  if (!f) throw FileError("failed writing " + path.string());
}

std::string accuracy_line(const CvReport& r) {
  return "accuracy " + fixed4(r.mean) + " ± " + fixed4(r.stddev) + " (" +
         std::to_string(r.fold_accuracy.size()) + " folds)\n";
}

int cmd_train(Options& o, std::ostream& out) {
  finalize_config(o);
  const Dataset data = load_dataset(o.data, o.config.seed, o.folds);
  const UnsupervisedResult model = train_unsupervised(strip_labels(data.graphs), o.config);

  const Checkpoint ck{data.name, o.data.subsample, data.spec, o.config, model.params};
  const fs::path ckpt_path =
      o.checkpoint.empty() ? fs::path(o.out) / "checkpoint.json" : fs::path(o.checkpoint);
  const std::string ckpt_text = checkpoint_to_json(ck);
  write_file(ckpt_path, ckpt_text);

  const CvReport report = o.train_protocol == "per-fold"
                              ? cross_validate(data.graphs, o.config, o.folds)
                              : evaluate(data.graphs, model.params, o.config, o.folds);

  Json history = Json::array();
  for (const EpochRecord& e : model.history) {
    history.push_back({{"epoch", e.epoch},
                       {"lr", e.learning_rate},
                       {"train_loss", e.train_loss},
                       {"validation_loss", e.validation_loss}});
  }
  const Json saved = Json::parse(ckpt_text);
  Json metrics{{"command", "train"},
               {"dataset", data.name},
               {"graphs", data.graphs.size()},
               {"subsample", o.data.subsample},
               {"features", saved.at("features")},
               {"feature_dim", model.params.feature_dim},
               {"seed", o.config.seed},
               {"config", saved.at("config")},
               {"protocol", o.train_protocol},
               {"best_epoch", model.best_epoch},
               {"best_validation_loss", model.best_validation_loss},
               {"history", std::move(history)},
               {"cv", report_json(report)}};
  const fs::path metrics_path =
      o.metrics.empty() ? fs::path(o.out) / "metrics.json" : fs::path(o.metrics);
  write_file(metrics_path, metrics.dump(2) + "\n");

  out << data.name << ": " << data.graphs.size() << " graphs, best epoch " << model.best_epoch
      << ", validation loss " << number(model.best_validation_loss) << "\n";
  out << accuracy_line(report);
  out << "checkpoint " << ckpt_path.string() << "\nmetrics " << metrics_path.string() << "\n";
  return kExitSuccess;
}

Checkpoint load_for_dataset(Options& o, Dataset& data) {
  Checkpoint ck = load_checkpoint(o.checkpoint);
  if (o.seed_override) ck.config.seed = *o.seed_override;
  DatasetOptions d = o.data;
  if (d.dataset.empty()) d.dataset = ck.dataset;
  d.subsample = ck.subsample;
  d.features = std::string(to_string(ck.features.mode));
  d.max_degree = ck.features.max_degree;
  data = load_dataset(d, ck.config.seed, o.folds);
  const std::size_t dim = data.graphs.empty() ? 0 : data.graphs.front().features().cols();
  if (dim != ck.params.feature_dim) {
    throw CompatibilityError("checkpoint expects " + std::to_string(ck.params.feature_dim) +
                             "-dimensional node features, dataset " + data.name + " has " +
                             std::to_string(dim));
  }
  return ck;
}

int cmd_eval(Options& o, std::ostream& out) {
  if (o.folds < 2) throw UsageError("--folds must be at least 2");
  Dataset data;
  const Checkpoint ck = load_for_dataset(o, data);
  TrainConfig config = ck.config;
  config.jobs = o.config.jobs;
  const CvReport report = evaluate(data.graphs, ck.params, config, o.folds);
  if (!o.metrics.empty()) {
    Json metrics{{"command", "eval"},
                 {"dataset", data.name},
                 {"graphs", data.graphs.size()},
                 {"checkpoint", o.checkpoint},
                 {"seed", config.seed},
                 {"cv", report_json(report)}};
    write_file(o.metrics, metrics.dump(2) + "\n");
  }
  out << data.name << ": " << accuracy_line(report);
  return kExitSuccess;
}

int cmd_sweep(Options& o, std::ostream& out) {
  finalize_config(o);
  std::vector<std::pair<double, int>> points;
  for (double g : o.gammas) {
    for (int k : o.ks) {
      if (std::find(points.begin(), points.end(), std::pair{g, k}) == points.end()) {
        points.emplace_back(g, k);
      }
    }
  }
  for (const auto& [g, k] : points) {
    if (!(g > 0.0) || k < 1) throw UsageError("sweep values need gamma > 0 and k >= 1");
  }
  const Dataset data = load_dataset(o.data, o.config.seed, o.folds);

  std::vector<CvReport> reports(points.size());
  const int outer = std::min<int>(o.config.jobs, static_cast<int>(points.size()));
  parallel_for(points.size(), outer, [&](std::size_t i) {
    TrainConfig config = o.config;
    config.gamma = points[i].first;
    config.steps = points[i].second;
    config.jobs = std::max(1, o.config.jobs / std::max(1, outer));
    reports[i] = run_protocol(o.sweep_protocol, data.graphs, config, o.folds);
  });

  std::string csv = "gamma,k,accuracy_mean,accuracy_std,folds\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv += number(points[i].first) + "," + std::to_string(points[i].second) + "," +
           number(reports[i].mean) + "," + number(reports[i].stddev) + "," +
           std::to_string(reports[i].fold_accuracy.size()) + "\n";
  }
  const fs::path path =
      o.metrics.empty() ? fs::path(o.out) / "sweep.csv" : fs::path(o.metrics);
  write_file(path, csv);
  out << csv << "sweep " << path.string() << "\n";
  return kExitSuccess;
}

int cmd_export(Options& o, std::ostream& out) {
  Dataset data;
  const Checkpoint ck = load_for_dataset(o, data);
  if (o.graph >= data.graphs.size()) {
    throw IndexError("graph index " + std::to_string(o.graph) + " out of range for " + data.name +
                     " with " + std::to_string(data.graphs.size()) + " graphs");
  }
  const std::vector<std::string> files =
      coarsening_sequence_dot(data.graphs[o.graph], ck.params, ck.config);
  for (std::size_t l = 0; l < files.size(); ++l) {
    const fs::path path = fs::path(o.out) / (data.name + "_graph" + std::to_string(o.graph) +
                                             "_level" + std::to_string(l) + ".dot");
    write_file(path, files[l]);
    out << path.string() << "\n";
  }
  return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Unsupervised graph coarsening trained with a k-step Sinkhorn loss", "otcoarsen");
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file supplying flag values");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  CLI::App* train = app.add_subcommand("train", "Train a coarsening model and report CV accuracy");
  add_dataset_flags(train, o.data, true);
  add_feature_flags(train, o.data);
  add_train_flags(train, o);
  train->add_option("--out", o.out, "Output directory")->capture_default_str();
  train->add_option("--checkpoint", o.checkpoint, "Checkpoint path (default OUT/checkpoint.json)");
  train->add_option("--metrics", o.metrics, "Metrics path (default OUT/metrics.json)");
  train->add_option("--cv-protocol", o.train_protocol, "frozen: one model for all folds")
      ->check(CLI::IsMember({"frozen", "per-fold"}))
      ->capture_default_str();

  CLI::App* eval = app.add_subcommand("eval", "Classifier CV on features of a frozen model");
  eval->add_option("--checkpoint", o.checkpoint, "Checkpoint written by train")->required();
  add_dataset_flags(eval, o.data, false);
  eval->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
  eval->add_option("--seed", o.seed_override, "Override the checkpoint seed");
  eval->add_option("--jobs", o.config.jobs, "Worker threads")->capture_default_str();
  eval->add_option("--metrics", o.metrics, "Optional metrics JSON path");

  CLI::App* sweep = app.add_subcommand("sweep", "CV accuracy over a gamma × k grid");
  add_dataset_flags(sweep, o.data, true);
  add_feature_flags(sweep, o.data);
  add_train_flags(sweep, o);
  sweep->add_option("--gammas", o.gammas, "Entropic regularization values")->required();
  sweep->add_option("--ks", o.ks, "Sinkhorn round counts")->required();
  sweep->add_option("--out", o.out, "Output directory")->capture_default_str();
  sweep->add_option("--metrics", o.metrics, "CSV path (default OUT/sweep.csv)");
  sweep->add_option("--cv-protocol", o.sweep_protocol, "per-fold: retrain the model in every fold")
      ->check(CLI::IsMember({"frozen", "per-fold"}))
      ->capture_default_str();

  CLI::App* exp = app.add_subcommand("export", "DOT drawings of one graph's coarsening sequence");
  exp->add_option("--checkpoint", o.checkpoint, "Checkpoint written by train")->required();
  add_dataset_flags(exp, o.data, false);
  exp->add_option("--graph", o.graph, "Graph index (0-based)")->required();
  exp->add_option("--out", o.out, "Output directory")->capture_default_str();

  for (CLI::App* sub : {train, eval, sweep, exp}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace otc::cli
