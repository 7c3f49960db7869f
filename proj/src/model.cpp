#include "softsense/model.hpp"

#include <string>

#include "softsense/errors.hpp"

namespace softsense {

void QaeLayerSpec::validate() const {
  if (in_dim == 0 || hidden_dim == 0 || head_units == 0) {
    throw ConfigError("QAE layer dimensions must be positive");
  }
  if (head_units % 2 != 0) {
    throw ConfigError("head_units must be even (two units per measurement step), got " +
                      std::to_string(head_units));
  }
}

std::vector<QaeLayerSpec> chain_specs(std::size_t input_dim,
                                      const std::vector<std::size_t>& hidden_dims,
                                      std::size_t head_units) {
  std::vector<QaeLayerSpec> specs;
  std::size_t in = input_dim;
  for (const std::size_t h : hidden_dims) {
    specs.push_back({in, h, head_units});
    specs.back().validate();
    in = h;
  }
  return specs;
}

namespace {

const QaeLayerSpec& checked(const QaeLayerSpec& s) {
  s.validate();
  return s;
}

}  // namespace

QaeLayer::QaeLayer(const QaeLayerSpec& s)
    : encoder(checked(s).in_dim, s.hidden_dim, Activation::relu),
      decoder_x(s.hidden_dim, s.in_dim, Activation::linear),
      decoder_y(s.hidden_dim, s.head_units, Activation::linear) {}

void QaeLayer::initialize(Rng& rng) {
  encoder.initialize(rng);
  decoder_x.initialize(rng);
  decoder_y.initialize(rng);
  variance = VarianceParams{};
}

QaeLayerSpec QaeLayer::spec() const {
  return {encoder.in_dim(), encoder.out_dim(), decoder_y.out_dim()};
}

std::size_t QaeLayer::parameter_count() const {
  return encoder.parameter_count() + decoder_x.parameter_count() + decoder_y.parameter_count();
}

QaeOutput qae_forward(const QaeLayer& layer, const Matrix& x) {
  QaeOutput out;
  out.hidden = dense_forward(layer.encoder, x);
  out.reconstruction = dense_forward(layer.decoder_x, out.hidden);
  out.head_probs = head_softmax(dense_forward(layer.decoder_y, out.hidden));
  return out;
}

HeadClassifier::HeadClassifier(std::size_t in_dim, const std::vector<std::size_t>& hidden_dims,
                               std::size_t head_units) {
  if (head_units == 0 || head_units % 2 != 0) {
    throw ConfigError("classifier head_units must be positive and even, got " +
                      std::to_string(head_units));
  }
  std::size_t in = in_dim;
  for (const std::size_t h : hidden_dims) {
    hidden.emplace_back(in, h, Activation::relu);
    in = h;
  }
  output = DenseLayer(in, head_units, Activation::linear);
}

void HeadClassifier::initialize(Rng& rng) {
  for (auto& layer : hidden) layer.initialize(rng);
  output.initialize(rng);
}

std::size_t HeadClassifier::in_dim() const {
  return hidden.empty() ? output.in_dim() : hidden.front().in_dim();
}

std::size_t HeadClassifier::parameter_count() const {
  std::size_t total = output.parameter_count();
  for (const auto& layer : hidden) total += layer.parameter_count();
  return total;
}

Matrix classifier_logits(const HeadClassifier& clf, const Matrix& x) {
  Matrix h = x;
  for (const auto& layer : clf.hidden) h = dense_forward(layer, h);
  return dense_forward(clf.output, h);
}

std::string ModelKind::abbreviation() const {
  std::string out;
  if (pretraining != Pretraining::none) {
    out = std::string(stacked ? "S" : "") + (pretraining == Pretraining::quality ? "QAE" : "AE");
    out += "+";
  }
  out += classifier == ClassifierKind::logistic ? "LR" : "NN";
  return out;
}

ModelKind ModelKind::parse(std::string_view name) {
  ModelKind kind;
  std::string_view rest = name;
  const auto plus = rest.find('+');
  if (plus == std::string_view::npos) {
    kind.pretraining = Pretraining::none;
    kind.stacked = false;
  } else {
    const std::string_view pre = rest.substr(0, plus);
    rest = rest.substr(plus + 1);
    if (pre == "QAE" || pre == "SQAE") {
      kind.pretraining = Pretraining::quality;
    } else if (pre == "AE" || pre == "SAE") {
      kind.pretraining = Pretraining::plain;
    } else {
      throw ConfigError("unknown model kind '" + std::string(name) + "'");
    }
    kind.stacked = pre.front() == 'S';
  }
  if (rest == "LR") {
    kind.classifier = ClassifierKind::logistic;
  } else if (rest == "NN") {
    kind.classifier = ClassifierKind::mlp;
  } else {
    throw ConfigError("unknown model kind '" + std::string(name) + "'");
  }
  return kind;
}

std::vector<std::size_t> ModelKind::pretrain_dims(
    const std::vector<std::size_t>& hidden_dims) const {
  if (pretraining == Pretraining::none) return {};
  if (hidden_dims.empty()) {
    throw ConfigError("model kind " + abbreviation() + " needs at least one hidden dimension");
  }
  if (stacked) return hidden_dims;
  return {hidden_dims.back()};
}

std::size_t StackedModel::input_dim() const {
  return layers.empty() ? classifier.in_dim() : layers.front().encoder.in_dim();
}

std::size_t StackedModel::latent_dim() const {
  return layers.empty() ? classifier.in_dim() : layers.back().encoder.out_dim();
}

std::size_t StackedModel::parameter_count() const {
  std::size_t total = classifier.parameter_count();
  for (const auto& layer : layers) total += layer.parameter_count();
  return total;
}

Matrix encode(const StackedModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim()) {
    throw ShapeError("encode: model expects " + std::to_string(model.input_dim()) +
                     " input columns, got " + x.shape_string());
  }
  Matrix h = x;
  for (const auto& layer : model.layers) h = dense_forward(layer.encoder, h);
  return h;
}

Prediction prediction_from_probs(const Matrix& head_probs) {
  const std::size_t heads = head_probs.cols() / 2;
  Prediction out{Matrix(head_probs.rows(), heads), HeadLabels(head_probs.rows(), heads)};
  for (std::size_t i = 0; i < head_probs.rows(); ++i) {
    for (std::size_t j = 0; j < heads; ++j) {
      const double p = head_probs(i, 2 * j + 1);
      out.positive_prob(i, j) = p;
      out.hard(i, j) = p >= 0.5 ? Label::positive : Label::negative;
    }
  }
  return out;
}

Prediction predict(const StackedModel& model, const Matrix& x) {
  return prediction_from_probs(head_softmax(classifier_logits(model.classifier, encode(model, x))));
}

}  // namespace softsense
