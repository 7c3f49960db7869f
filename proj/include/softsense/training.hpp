#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "softsense/labels.hpp"
#include "softsense/losses.hpp"
#include "softsense/matrix.hpp"
#include "softsense/model.hpp"
#include "softsense/rng.hpp"

namespace softsense {

/// How a layer's reconstruction loss J_x and head loss J_y are combined.
enum class LossCombiner {
  variance_weighted,    // trainable σ₁, σ₂
  naive,                // λ·J_x + (1−λ)·J_y
  reconstruction_only,  // plain autoencoder, J_x alone
};

enum class ImbalanceMethod { weighted_class, smote, none };

std::string_view combiner_name(LossCombiner c);
LossCombiner combiner_from_name(std::string_view name);
std::string_view imbalance_name(ImbalanceMethod m);
ImbalanceMethod imbalance_from_name(std::string_view name);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 512;  // capped at the training-set size
  double early_stop_min_delta = 1e-5;
  std::size_t patience = 10;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 42;
  LossCombiner combiner = LossCombiner::variance_weighted;
  double naive_lambda = 0.5;
  ImbalanceMethod imbalance = ImbalanceMethod::weighted_class;
  /// Whether the final classifier stage uses the class weights as well.
  bool classifier_class_weights = true;
  /// Early stopping monitors the validation loss instead of the training loss.
  bool monitor_validation = false;
  std::size_t smote_neighbors = 5;
  std::vector<std::size_t> mlp_hidden{100, 50};

  void validate() const;
};

struct LossSettings {
  LossCombiner combiner = LossCombiner::variance_weighted;
  double naive_lambda = 0.5;
};

struct QaeLossTerms {
  double loss = 0.0;
  double recon = 0.0;
  double pred = 0.0;
};

struct QaeGradients {
  DenseGradients encoder;
  DenseGradients decoder_x;
  DenseGradients decoder_y;
  double grad_s1 = 0.0;
  double grad_s2 = 0.0;
};

/// Joint loss of one QAE layer on a batch and, if `grads` is set, its exact
/// gradient w.r.t. every weight, bias and log-variance.
QaeLossTerms qae_loss(const QaeLayer& layer, const Matrix& x, const HeadLabels& labels,
                      const ClassWeights& weights, const LossSettings& settings,
                      QaeGradients* grads = nullptr);

struct ClassifierGradients {
  std::vector<DenseGradients> hidden;
  DenseGradients output;
};

/// Weighted multi-head cross-entropy of a classifier and its gradient.
double classifier_loss(const HeadClassifier& clf, const Matrix& x, const HeadLabels& labels,
                       const ClassWeights& weights, ClassifierGradients* grads = nullptr);

/// One row of a loss history. Fields that do not apply to a stage are NaN.
struct EpochRecord {
  std::size_t epoch = 0;    // 1-based
  std::size_t updates = 0;  // cumulative gradient updates
  double loss = 0.0;
  double recon = 0.0;
  double pred = 0.0;
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;
  double monitored = 0.0;  // value early stopping looked at
};

using LossHistory = std::vector<EpochRecord>;

/// Optional held-out rows for validation-monitored early stopping.
struct Validation {
  const Matrix* features = nullptr;
  const HeadLabels* labels = nullptr;
};

struct QaeTrainResult {
  QaeLayer layer;
  LossHistory history;
};

/// Minibatch Adam on one QAE layer. Stops after max_epochs or once the epoch
/// loss has failed to improve by early_stop_min_delta for `patience` epochs.
QaeTrainResult train_qae_layer(const Matrix& x, const HeadLabels& labels,
                               const ClassWeights& weights, const QaeLayerSpec& spec,
                               const TrainConfig& cfg, Rng& rng,
                               const Validation& validation = {});

struct ClassifierTrainResult {
  HeadClassifier classifier;
  LossHistory history;
};

ClassifierTrainResult train_classifier(const Matrix& latent, const HeadLabels& labels,
                                       const ClassWeights& weights, const TrainConfig& cfg,
                                       Rng& rng,
                                       const std::vector<std::size_t>& hidden_dims = {},
                                       const Validation& validation = {});

struct StackTrainResult {
  StackedModel model;
  std::vector<LossHistory> layer_histories;
  LossHistory classifier_history;
};

/// Training rows after imbalance handling plus the class weights to use.
struct PreparedTraining {
  Matrix features;
  HeadLabels labels;
  ClassWeights weights;
};

/// weighted_class: per-head class weights; smote: per-head oversampling to parity with
/// unit weights; none: unit weights.
PreparedTraining prepare_training(const Matrix& x, const HeadLabels& labels,
                                  const TrainConfig& cfg, Rng& rng);

/// Greedy layer-wise training: each layer learns on the previous layer's
/// hidden code against the same labels, then a logistic classifier is fit on
/// the final code. Random streams are split from `rng` in the order
/// imbalance handling, layer 1..n, classifier.
StackTrainResult stack_train(const Matrix& x0, const HeadLabels& labels,
                             const std::vector<QaeLayerSpec>& specs, const TrainConfig& cfg,
                             Rng& rng, const Validation& validation = {});

/// Any grid model: LR, NN, (S)QAE+LR/NN or plain (S)AE+LR/NN.
StackTrainResult train_model(const ModelKind& kind, const Matrix& x0, const HeadLabels& labels,
                             const std::vector<std::size_t>& hidden_dims,
                             const TrainConfig& cfg, Rng& rng,
                             const Validation& validation = {});

enum class BaselineKind { logistic, mlp, plain_stacked_ae };

/// Baselines: logistic on raw features, MLP with cfg.mlp_hidden, or a stack
/// pretrained on reconstruction alone followed by `classifier`.
StackTrainResult train_baseline(BaselineKind kind, const Matrix& x0, const HeadLabels& labels,
                                const std::vector<std::size_t>& hidden_dims,
                                const TrainConfig& cfg, Rng& rng,
                                ClassifierKind classifier = ClassifierKind::logistic);

}  // namespace softsense
