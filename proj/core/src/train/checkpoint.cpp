#include "otc/train/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "otc/error.hpp"

namespace otc {
namespace {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m) {
  Json values = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    values.push_back(std::move(row));
  }
  return Json{{"shape", {m.rows(), m.cols()}}, {"values", std::move(values)}};
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = j.at("shape").at(0).get<std::size_t>();
  const auto cols = j.at("shape").at(1).get<std::size_t>();
  const Json& values = j.at("values");
  if (values.size() != rows) throw FormatError("checkpoint matrix row count does not match shape");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (values[i].size() != cols) throw FormatError("checkpoint matrix column count does not match shape");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = values[i][c].get<double>();
  }
  return m;
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& ck) {
  const TrainConfig& c = ck.config;
  Json config{{"gamma", c.gamma},
              {"k", c.steps},
              {"p", c.p},
              {"ratio", c.ratio},
              {"levels", c.levels},
              {"hidden", c.hidden},
              {"init-gain", c.init_gain},
              {"lr", c.lr},
              {"max-epochs", c.max_epochs},
              {"lr-decay", c.lr_decay},
              {"decay-every", c.decay_every},
              {"val-fraction", c.validation_fraction},
              {"encoder-activation", std::string(to_string(c.encoder_activation))},
              {"decoder-activation", std::string(to_string(c.decoder_activation))},
              {"classifier-hidden", c.classifier.hidden},
              {"classifier-epochs", c.classifier.epochs},
              {"classifier-lr", c.classifier.lr}};
  Json levels = Json::array();
  for (const LevelParams& l : ck.params.levels) {
    levels.push_back({{"scoring", matrix_to_json(l.scoring)},
                      {"encoder", matrix_to_json(l.encoder)},
                      {"decoder", matrix_to_json(l.decoder)}});
  }
  Json doc{{"version", std::string(kCheckpointVersion)},
           {"seed", c.seed},
           {"dataset", ck.dataset},
           {"subsample", ck.subsample},
           {"features",
            {{"mode", std::string(to_string(ck.features.mode))},
             {"max-degree", ck.features.max_degree},
             {"standardize-attributes", ck.features.standardize_attributes}}},
           {"config", std::move(config)},
           {"params",
            {{"feature-dim", ck.params.feature_dim},
             {"hidden", ck.params.hidden},
             {"levels", std::move(levels)}}}};
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(std::string_view text) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("version").get<std::string>() != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version '" + doc.at("version").get<std::string>() +
                        "'");
    }
    Checkpoint ck;
    ck.dataset = doc.at("dataset").get<std::string>();
    ck.subsample = doc.at("subsample").get<double>();
    const Json& f = doc.at("features");
    ck.features.mode = feature_mode_from_string(f.at("mode").get<std::string>());
    ck.features.max_degree = f.at("max-degree").get<std::size_t>();
    ck.features.standardize_attributes = f.at("standardize-attributes").get<bool>();

    const Json& c = doc.at("config");
    TrainConfig& cfg = ck.config;
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.gamma = c.at("gamma").get<double>();
    cfg.steps = c.at("k").get<int>();
    cfg.p = c.at("p").get<double>();
    cfg.ratio = c.at("ratio").get<double>();
    cfg.levels = c.at("levels").get<int>();
    cfg.hidden = c.at("hidden").get<int>();
    cfg.init_gain = c.at("init-gain").get<double>();
    cfg.lr = c.at("lr").get<double>();
    cfg.max_epochs = c.at("max-epochs").get<int>();
    cfg.lr_decay = c.at("lr-decay").get<double>();
    cfg.decay_every = c.at("decay-every").get<int>();
    cfg.validation_fraction = c.at("val-fraction").get<double>();
    cfg.encoder_activation = activation_from_string(c.at("encoder-activation").get<std::string>());
    cfg.decoder_activation = activation_from_string(c.at("decoder-activation").get<std::string>());
    cfg.classifier.hidden = c.at("classifier-hidden").get<int>();
    cfg.classifier.epochs = c.at("classifier-epochs").get<int>();
    cfg.classifier.lr = c.at("classifier-lr").get<double>();

    const Json& p = doc.at("params");
    ck.params.feature_dim = p.at("feature-dim").get<std::size_t>();
    ck.params.hidden = p.at("hidden").get<std::size_t>();
    ck.params.encoder_activation = cfg.encoder_activation;
    ck.params.decoder_activation = cfg.decoder_activation;
    for (const Json& l : p.at("levels")) {
      LevelParams level{matrix_from_json(l.at("scoring")), matrix_from_json(l.at("encoder")),
                        matrix_from_json(l.at("decoder"))};
      const std::size_t d = ck.params.feature_dim, h = ck.params.hidden;
      if (level.scoring.rows() != d || level.scoring.cols() != 1 || level.encoder.rows() != d ||
          level.encoder.cols() != h || level.decoder.rows() != h || level.decoder.cols() != d) {
        throw FormatError("checkpoint level parameters do not match feature-dim/hidden");
      }
      ck.params.levels.push_back(std::move(level));
    }
    if (ck.params.levels.size() != static_cast<std::size_t>(cfg.levels)) {
      throw FormatError("checkpoint level count does not match its config");
    }
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace otc
