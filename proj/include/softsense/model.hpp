#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "softsense/dataset.hpp"
#include "softsense/dense.hpp"
#include "softsense/labels.hpp"
#include "softsense/losses.hpp"
#include "softsense/matrix.hpp"
#include "softsense/rng.hpp"

namespace softsense {

/// Shape of one quality-driven autoencoder layer. head_units is two per
/// measurement step (negative and positive unit).
struct QaeLayerSpec {
  std::size_t in_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t head_units = 0;

  void validate() const;
  std::size_t n_heads() const noexcept { return head_units / 2; }
  friend bool operator==(const QaeLayerSpec&, const QaeLayerSpec&) = default;
};

/// Chains `hidden_dims` into per-layer specs starting from `input_dim`.
std::vector<QaeLayerSpec> chain_specs(std::size_t input_dim,
                                      const std::vector<std::size_t>& hidden_dims,
                                      std::size_t head_units);

/// Encoder (relu) with two decoders from the hidden code: decoder_x
/// reconstructs the input (linear), decoder_y emits per-head logit pairs.
struct QaeLayer {
  DenseLayer encoder;
  DenseLayer decoder_x;
  DenseLayer decoder_y;
  VarianceParams variance;

  QaeLayer() = default;
  explicit QaeLayer(const QaeLayerSpec& spec);

  void initialize(Rng& rng);
  QaeLayerSpec spec() const;
  std::size_t parameter_count() const;

  friend bool operator==(const QaeLayer&, const QaeLayer&) = default;
};

struct QaeOutput {
  Matrix hidden;
  Matrix reconstruction;
  Matrix head_probs;
};

QaeOutput qae_forward(const QaeLayer& layer, const Matrix& x);

/// Relu hidden layers followed by a linear layer whose logits are normalized
/// per head by a two-way softmax. With no hidden layers this is logistic
/// regression over each head.
struct HeadClassifier {
  std::vector<DenseLayer> hidden;
  DenseLayer output;

  HeadClassifier() = default;
  HeadClassifier(std::size_t in_dim, const std::vector<std::size_t>& hidden_dims,
                 std::size_t head_units);

  void initialize(Rng& rng);
  std::size_t in_dim() const;
  std::size_t head_units() const noexcept { return output.out_dim(); }
  std::size_t parameter_count() const;

  friend bool operator==(const HeadClassifier&, const HeadClassifier&) = default;
};

Matrix classifier_logits(const HeadClassifier& clf, const Matrix& x);

enum class Pretraining { none, plain, quality };
enum class ClassifierKind { logistic, mlp };

/// Model family in the comparison grid, e.g. SQAE+LR or NN.
struct ModelKind {
  Pretraining pretraining = Pretraining::quality;
  bool stacked = true;
  ClassifierKind classifier = ClassifierKind::logistic;

  /// "LR", "NN", "QAE+LR", "SQAE+NN", "AE+LR", "SAE+NN", ...
  std::string abbreviation() const;
  /// Throws ConfigError on unknown names.
  static ModelKind parse(std::string_view name);
  /// Hidden layer widths this kind pretrains with, given the configured stack.
  std::vector<std::size_t> pretrain_dims(const std::vector<std::size_t>& hidden_dims) const;

  friend bool operator==(const ModelKind&, const ModelKind&) = default;
};

/// Greedily trained encoder stack plus the classifier on its final code.
struct StackedModel {
  std::vector<QaeLayer> layers;
  HeadClassifier classifier;
  StandardizationStats standardization;

  std::size_t input_dim() const;
  std::size_t latent_dim() const;
  std::size_t n_heads() const noexcept { return classifier.head_units() / 2; }
  std::size_t parameter_count() const;

  friend bool operator==(const StackedModel&, const StackedModel&) = default;
};

/// Final hidden representation X_n. Input must already be standardized.
Matrix encode(const StackedModel& model, const Matrix& x);

struct Prediction {
  Matrix positive_prob;  // n × heads
  HeadLabels hard;       // positive iff probability >= 0.5
};

/// Input must already be standardized with model.standardization.
Prediction predict(const StackedModel& model, const Matrix& x);

/// Positive-unit probabilities and thresholded labels from paired probabilities.
Prediction prediction_from_probs(const Matrix& head_probs);

}  // namespace softsense
