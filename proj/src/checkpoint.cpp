#include "softsense/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "softsense/errors.hpp"

namespace softsense {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "softsense-checkpoint";

json dense_to_json(const DenseLayer& layer) {
  return json{{"in", layer.in_dim()},
              {"out", layer.out_dim()},
              {"activation", std::string(activation_name(layer.activation))},
              {"weights", layer.weights.data()},
              {"bias", layer.bias}};
}

DenseLayer dense_from_json(const json& j) {
  const auto in = j.at("in").get<std::size_t>();
  const auto out = j.at("out").get<std::size_t>();
  DenseLayer layer(in, out, activation_from_name(j.at("activation").get<std::string>()));
  auto weights = j.at("weights").get<std::vector<double>>();
  auto bias = j.at("bias").get<std::vector<double>>();
  if (weights.size() != in * out || bias.size() != out) {
    throw DataError("checkpoint: dense layer " + std::to_string(in) + "->" + std::to_string(out) +
                    " has " + std::to_string(weights.size()) + " weights and " +
                    std::to_string(bias.size()) + " biases");
  }
  layer.weights = Matrix(out, in, std::move(weights));
  layer.bias = std::move(bias);
  return layer;
}

}  // namespace

std::string checkpoint_to_string(const Checkpoint& ckpt) {
  json layers = json::array();
  for (const auto& layer : ckpt.model.layers) {
    layers.push_back(json{{"encoder", dense_to_json(layer.encoder)},
                          {"decoder_x", dense_to_json(layer.decoder_x)},
                          {"decoder_y", dense_to_json(layer.decoder_y)},
                          {"log_var_recon", layer.variance.log_var_recon},
                          {"log_var_pred", layer.variance.log_var_pred}});
  }
  json hidden = json::array();
  for (const auto& layer : ckpt.model.classifier.hidden) hidden.push_back(dense_to_json(layer));

  json doc;
  doc["format"] = kFormatName;
  doc["version"] = kCheckpointVersion;
  doc["model_kind"] = ckpt.kind.abbreviation();
  doc["seed"] = ckpt.seed;
  doc["input_dim"] = ckpt.model.input_dim();
  doc["n_heads"] = ckpt.model.n_heads();
  doc["feature_names"] = ckpt.feature_names;
  doc["head_names"] = ckpt.head_names;
  doc["train_class_sizes"] = ckpt.train_class_sizes;
  doc["standardization"] = {{"mean", ckpt.model.standardization.mean},
                            {"stddev", ckpt.model.standardization.stddev}};
  doc["layers"] = std::move(layers);
  doc["classifier"] = {{"hidden", std::move(hidden)},
                       {"output", dense_to_json(ckpt.model.classifier.output)}};
  doc["config"] = ckpt.config_echo;
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormatName) {
      throw DataError("checkpoint: unrecognised format tag");
    }
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    Checkpoint ckpt;
    ckpt.kind = ModelKind::parse(doc.at("model_kind").get<std::string>());
    ckpt.seed = doc.at("seed").get<std::uint64_t>();
    ckpt.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    ckpt.head_names = doc.at("head_names").get<std::vector<std::string>>();
    ckpt.train_class_sizes =
        doc.at("train_class_sizes").get<std::vector<std::array<std::size_t, 2>>>();
    ckpt.model.standardization.mean =
        doc.at("standardization").at("mean").get<std::vector<double>>();
    ckpt.model.standardization.stddev =
        doc.at("standardization").at("stddev").get<std::vector<double>>();
    for (const auto& l : doc.at("layers")) {
      QaeLayer layer;
      layer.encoder = dense_from_json(l.at("encoder"));
      layer.decoder_x = dense_from_json(l.at("decoder_x"));
      layer.decoder_y = dense_from_json(l.at("decoder_y"));
      layer.variance.log_var_recon = l.at("log_var_recon").get<double>();
      layer.variance.log_var_pred = l.at("log_var_pred").get<double>();
      ckpt.model.layers.push_back(std::move(layer));
    }
    for (const auto& h : doc.at("classifier").at("hidden")) {
      ckpt.model.classifier.hidden.push_back(dense_from_json(h));
    }
    ckpt.model.classifier.output = dense_from_json(doc.at("classifier").at("output"));
    ckpt.config_echo = doc.at("config").get<std::string>();

    if (ckpt.model.input_dim() != doc.at("input_dim").get<std::size_t>() ||
        ckpt.model.n_heads() != doc.at("n_heads").get<std::size_t>()) {
      throw DataError("checkpoint: declared dimensions disagree with the stored layers");
    }
    std::size_t width = ckpt.model.input_dim();
    for (const auto& layer : ckpt.model.layers) {
      if (layer.encoder.in_dim() != width) {
        throw DataError("checkpoint: layer chain is inconsistent");
      }
      width = layer.encoder.out_dim();
    }
    if (ckpt.model.classifier.in_dim() != width) {
      throw DataError("checkpoint: classifier input width does not match the latent width");
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path.string() + "'");
  out << checkpoint_to_string(ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_string(buf.str());
}

}  // namespace softsense
