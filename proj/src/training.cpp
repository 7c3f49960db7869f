#include "softsense/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "softsense/adam.hpp"
#include "softsense/errors.hpp"
#include "softsense/smote.hpp"

namespace softsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void scale_in_place(Matrix& m, double factor) {
  for (double& v : m.values()) v *= factor;
}

void add_in_place(Matrix& into, const Matrix& other) {
  require_same_shape(into, other, "gradient accumulation");
  auto a = into.values();
  const auto b = other.values();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

/// One Adam state per parameter block, all sharing a configuration.
class BlockOptimizer {
 public:
  BlockOptimizer(const std::vector<std::size_t>& sizes, double learning_rate) {
    AdamConfig cfg;
    cfg.learning_rate = learning_rate;
    for (const std::size_t n : sizes) states_.emplace_back(n, cfg);
  }

  void step(const std::vector<std::span<double>>& params,
            const std::vector<std::span<const double>>& grads) {
    if (params.size() != states_.size() || grads.size() != states_.size()) {
      throw InternalError("optimizer block count mismatch");
    }
    for (std::size_t i = 0; i < states_.size(); ++i) adam_step(states_[i], params[i], grads[i]);
  }

 private:
  std::vector<AdamState> states_;
};

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.uniform_index(i)]);
  }
}

/// Epoch loop shared by every trainer: shuffled minibatches, divergence
/// checks, per-epoch evaluation and min-delta/patience early stopping.
template <class StepFn, class EvalFn>
LossHistory run_epochs(std::size_t n_rows, const TrainConfig& cfg, Rng& rng, StepFn&& step,
                       EvalFn&& evaluate) {
  if (n_rows == 0) {
    throw DataError("training set is empty");
  }
  LossHistory history;
  const std::size_t batch = std::min(cfg.batch_size, n_rows);
  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  std::size_t updates = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle(order, rng);
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n_rows; start += batch, ++batch_index) {
      const std::size_t len = std::min(batch, n_rows - start);
      const double loss = step(std::span<const std::size_t>(order.data() + start, len));
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite training loss", epoch, batch_index);
      }
      ++updates;
    }
    EpochRecord rec = evaluate();
    rec.epoch = epoch;
    rec.updates = updates;
    if (!std::isfinite(rec.loss) || !std::isfinite(rec.monitored)) {
      throw NumericError("non-finite epoch loss", epoch, batch_index);
    }
    history.push_back(rec);
    if (rec.monitored < best - cfg.early_stop_min_delta) {
      best = rec.monitored;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return history;
}

void require_rows(const Matrix& x, const HeadLabels& labels, const char* what) {
  if (x.rows() != labels.n_samples()) {
    throw ShapeError(std::string(what) + ": " + std::to_string(x.rows()) + " feature rows but " +
                     std::to_string(labels.n_samples()) + " label rows");
  }
}

std::span<const double> cspan(const Matrix& m) { return m.values(); }
std::span<const double> cspan(const std::vector<double>& v) { return v; }

}  // namespace

std::string_view combiner_name(LossCombiner c) {
  switch (c) {
    case LossCombiner::variance_weighted: return "variance_weighted";
    case LossCombiner::naive: return "naive";
    case LossCombiner::reconstruction_only: return "reconstruction_only";
  }
  return "variance_weighted";
}

LossCombiner combiner_from_name(std::string_view name) {
  if (name == "variance_weighted") return LossCombiner::variance_weighted;
  if (name == "naive") return LossCombiner::naive;
  if (name == "reconstruction_only") return LossCombiner::reconstruction_only;
  throw ConfigError("unknown loss combiner '" + std::string(name) + "'");
}

std::string_view imbalance_name(ImbalanceMethod m) {
  switch (m) {
    case ImbalanceMethod::weighted_class: return "weighted_class";
    case ImbalanceMethod::smote: return "smote";
    case ImbalanceMethod::none: return "none";
  }
  return "none";
}

ImbalanceMethod imbalance_from_name(std::string_view name) {
  if (name == "weighted_class") return ImbalanceMethod::weighted_class;
  if (name == "smote") return ImbalanceMethod::smote;
  if (name == "none") return ImbalanceMethod::none;
  throw ConfigError("unknown imbalance method '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(early_stop_min_delta >= 0.0)) throw ConfigError("min_delta must be non-negative");
  if (patience == 0) throw ConfigError("patience must be positive");
  if (!(naive_lambda >= 0.0 && naive_lambda <= 1.0)) {
    throw ConfigError("naive_lambda must lie in [0, 1]");
  }
  if (smote_neighbors == 0) throw ConfigError("smote_neighbors must be positive");
  for (const std::size_t h : mlp_hidden) {
    if (h == 0) throw ConfigError("mlp hidden widths must be positive");
  }
}

QaeLossTerms qae_loss(const QaeLayer& layer, const Matrix& x, const HeadLabels& labels,
                      const ClassWeights& weights, const LossSettings& settings,
                      QaeGradients* grads) {
  require_rows(x, labels, "qae_loss");
  DenseCache enc_cache, dx_cache, dy_cache;
  const bool want = grads != nullptr;
  const Matrix hidden = dense_forward(layer.encoder, x, want ? &enc_cache : nullptr);
  const Matrix recon = dense_forward(layer.decoder_x, hidden, want ? &dx_cache : nullptr);
  const Matrix logits = dense_forward(layer.decoder_y, hidden, want ? &dy_cache : nullptr);
  LossGrad rec = mse_loss(x, recon);
  LogitLoss pred = multihead_weighted_ce_logits(labels, logits, weights);

  QaeLossTerms terms{0.0, rec.loss, pred.loss};
  double d_recon = 1.0, d_pred = 0.0, grad_s1 = 0.0, grad_s2 = 0.0;
  switch (settings.combiner) {
    case LossCombiner::variance_weighted: {
      const CombinedLoss c = combined_loss_variance(rec.loss, pred.loss, layer.variance);
      terms.loss = c.loss;
      d_recon = c.d_recon;
      d_pred = c.d_pred;
      grad_s1 = c.grad_s1;
      grad_s2 = c.grad_s2;
      break;
    }
    case LossCombiner::naive:
      terms.loss = combined_loss_naive(rec.loss, pred.loss, settings.naive_lambda);
      d_recon = settings.naive_lambda;
      d_pred = 1.0 - settings.naive_lambda;
      break;
    case LossCombiner::reconstruction_only:
      terms.loss = rec.loss;
      break;
  }
  if (!want) return terms;

  scale_in_place(rec.grad, d_recon);
  scale_in_place(pred.grad_logits, d_pred);
  grads->decoder_x = dense_backward(layer.decoder_x, dx_cache, rec.grad);
  grads->decoder_y = dense_backward(layer.decoder_y, dy_cache, pred.grad_logits);
  Matrix upstream = grads->decoder_x.input;
  add_in_place(upstream, grads->decoder_y.input);
  grads->encoder = dense_backward(layer.encoder, enc_cache, upstream);
  grads->grad_s1 = grad_s1;
  grads->grad_s2 = grad_s2;
  return terms;
}

double classifier_loss(const HeadClassifier& clf, const Matrix& x, const HeadLabels& labels,
                       const ClassWeights& weights, ClassifierGradients* grads) {
  require_rows(x, labels, "classifier_loss");
  const bool want = grads != nullptr;
  std::vector<DenseCache> caches(clf.hidden.size());
  Matrix h = x;
  for (std::size_t k = 0; k < clf.hidden.size(); ++k) {
    h = dense_forward(clf.hidden[k], h, want ? &caches[k] : nullptr);
  }
  DenseCache out_cache;
  const Matrix logits = dense_forward(clf.output, h, want ? &out_cache : nullptr);
  const LogitLoss loss = multihead_weighted_ce_logits(labels, logits, weights);
  if (!want) return loss.loss;

  grads->output = dense_backward(clf.output, out_cache, loss.grad_logits);
  grads->hidden.resize(clf.hidden.size());
  const Matrix* upstream = &grads->output.input;
  for (std::size_t k = clf.hidden.size(); k-- > 0;) {
    grads->hidden[k] = dense_backward(clf.hidden[k], caches[k], *upstream);
    upstream = &grads->hidden[k].input;
  }
  return loss.loss;
}

QaeTrainResult train_qae_layer(const Matrix& x, const HeadLabels& labels,
                               const ClassWeights& weights, const QaeLayerSpec& spec,
                               const TrainConfig& cfg, Rng& rng, const Validation& validation) {
  cfg.validate();
  spec.validate();
  require_rows(x, labels, "train_qae_layer");
  if (x.cols() != spec.in_dim) {
    throw ShapeError("train_qae_layer: layer expects " + std::to_string(spec.in_dim) +
                     " input columns, got " + x.shape_string());
  }
  if (labels.n_heads() * 2 != spec.head_units) {
    throw ShapeError("train_qae_layer: " + std::to_string(labels.n_heads()) +
                     " label heads for " + std::to_string(spec.head_units) + " head units");
  }
  QaeTrainResult result{QaeLayer(spec), {}};
  QaeLayer& layer = result.layer;
  layer.initialize(rng);
  const LossSettings settings{cfg.combiner, cfg.naive_lambda};
  const bool use_val = cfg.monitor_validation && validation.features != nullptr &&
                       validation.features->rows() > 0;

  BlockOptimizer opt({layer.encoder.weights.size(), layer.encoder.bias.size(),
                      layer.decoder_x.weights.size(), layer.decoder_x.bias.size(),
                      layer.decoder_y.weights.size(), layer.decoder_y.bias.size(), 1, 1},
                     cfg.learning_rate);
  const std::vector<std::span<double>> params{
      layer.encoder.weights.values(),   layer.encoder.bias,
      layer.decoder_x.weights.values(), layer.decoder_x.bias,
      layer.decoder_y.weights.values(), layer.decoder_y.bias,
      {&layer.variance.log_var_recon, 1}, {&layer.variance.log_var_pred, 1}};

  auto step = [&](std::span<const std::size_t> idx) {
    const Matrix xb = x.gather_rows(idx);
    const HeadLabels lb = labels.gather_rows(idx);
    QaeGradients g;
    const QaeLossTerms terms = qae_loss(layer, xb, lb, weights, settings, &g);
    if (!std::isfinite(terms.loss)) return terms.loss;
    opt.step(params, {cspan(g.encoder.weights), cspan(g.encoder.bias),
                      cspan(g.decoder_x.weights), cspan(g.decoder_x.bias),
                      cspan(g.decoder_y.weights), cspan(g.decoder_y.bias),
                      {&g.grad_s1, 1}, {&g.grad_s2, 1}});
    return terms.loss;
  };
  auto evaluate = [&]() {
    const QaeLossTerms t = qae_loss(layer, x, labels, weights, settings);
    EpochRecord rec;
    rec.loss = t.loss;
    rec.recon = t.recon;
    rec.pred = settings.combiner == LossCombiner::reconstruction_only ? kNaN : t.pred;
    const bool variance = settings.combiner == LossCombiner::variance_weighted;
    rec.sigma1_sq = variance ? layer.variance.sigma1_sq() : kNaN;
    rec.sigma2_sq = variance ? layer.variance.sigma2_sq() : kNaN;
    rec.monitored = use_val ? qae_loss(layer, *validation.features, *validation.labels, weights,
                                       settings)
                                  .loss
                            : t.loss;
    return rec;
  };
  result.history = run_epochs(x.rows(), cfg, rng, step, evaluate);
  return result;
}

ClassifierTrainResult train_classifier(const Matrix& latent, const HeadLabels& labels,
                                       const ClassWeights& weights, const TrainConfig& cfg,
                                       Rng& rng, const std::vector<std::size_t>& hidden_dims,
                                       const Validation& validation) {
  cfg.validate();
  require_rows(latent, labels, "train_classifier");
  ClassifierTrainResult result{HeadClassifier(latent.cols(), hidden_dims, 2 * labels.n_heads()),
                               {}};
  HeadClassifier& clf = result.classifier;
  clf.initialize(rng);
  const bool use_val = cfg.monitor_validation && validation.features != nullptr &&
                       validation.features->rows() > 0;

  std::vector<std::size_t> sizes;
  std::vector<std::span<double>> params;
  for (auto& layer : clf.hidden) {
    sizes.push_back(layer.weights.size());
    sizes.push_back(layer.bias.size());
    params.emplace_back(layer.weights.values());
    params.emplace_back(layer.bias);
  }
  sizes.push_back(clf.output.weights.size());
  sizes.push_back(clf.output.bias.size());
  params.emplace_back(clf.output.weights.values());
  params.emplace_back(clf.output.bias);
  BlockOptimizer opt(sizes, cfg.learning_rate);

  auto step = [&](std::span<const std::size_t> idx) {
    const Matrix xb = latent.gather_rows(idx);
    const HeadLabels lb = labels.gather_rows(idx);
    ClassifierGradients g;
    const double loss = classifier_loss(clf, xb, lb, weights, &g);
    if (!std::isfinite(loss)) return loss;
    std::vector<std::span<const double>> grads;
    for (const auto& h : g.hidden) {
      grads.push_back(cspan(h.weights));
      grads.push_back(cspan(h.bias));
    }
    grads.push_back(cspan(g.output.weights));
    grads.push_back(cspan(g.output.bias));
    opt.step(params, grads);
    return loss;
  };
  auto evaluate = [&]() {
    EpochRecord rec;
    rec.loss = classifier_loss(clf, latent, labels, weights);
    rec.recon = kNaN;
    rec.pred = rec.loss;
    rec.sigma1_sq = kNaN;
    rec.sigma2_sq = kNaN;
    rec.monitored = use_val ? classifier_loss(clf, *validation.features, *validation.labels,
                                              weights)
                            : rec.loss;
    return rec;
  };
  result.history = run_epochs(latent.rows(), cfg, rng, step, evaluate);
  return result;
}

PreparedTraining prepare_training(const Matrix& x, const HeadLabels& labels,
                                  const TrainConfig& cfg, Rng& rng) {
  require_rows(x, labels, "prepare_training");
  labels.require_each_sample_observed();
  switch (cfg.imbalance) {
    case ImbalanceMethod::weighted_class:
      return {x, labels, class_weights(labels)};
    case ImbalanceMethod::smote: {
      OversampledRows balanced = smote_balance_heads(x, labels, cfg.smote_neighbors, rng);
      return {std::move(balanced.features), std::move(balanced.labels),
              ClassWeights::uniform(labels.n_heads())};
    }
    case ImbalanceMethod::none:
      return {x, labels, ClassWeights::uniform(labels.n_heads())};
  }
  throw InternalError("unhandled imbalance method");
}

namespace {

StackTrainResult train_pipeline(const Matrix& x0, const HeadLabels& labels,
                                const std::vector<QaeLayerSpec>& specs, LossCombiner combiner,
                                const std::vector<std::size_t>& classifier_hidden,
                                const TrainConfig& cfg, Rng& rng, const Validation& validation) {
  cfg.validate();
  require_rows(x0, labels, "train");
  std::size_t width = x0.cols();
  for (const auto& spec : specs) {
    spec.validate();
    if (spec.in_dim != width) {
      throw ConfigError("layer specs are not chain-consistent: expected in_dim " +
                        std::to_string(width) + ", got " + std::to_string(spec.in_dim));
    }
    if (spec.head_units != 2 * labels.n_heads()) {
      throw ConfigError("layer spec has " + std::to_string(spec.head_units) + " head units for " +
                        std::to_string(labels.n_heads()) + " heads");
    }
    width = spec.hidden_dim;
  }

  Rng imbalance_rng = rng.split();
  const PreparedTraining prepared = prepare_training(x0, labels, cfg, imbalance_rng);

  TrainConfig layer_cfg = cfg;
  layer_cfg.combiner = combiner;

  StackTrainResult result;
  Matrix x = prepared.features;
  Matrix x_val = validation.features != nullptr ? *validation.features : Matrix();
  for (const auto& spec : specs) {
    Rng layer_rng = rng.split();
    const Validation val{validation.features != nullptr ? &x_val : nullptr, validation.labels};
    QaeTrainResult trained =
        train_qae_layer(x, prepared.labels, prepared.weights, spec, layer_cfg, layer_rng, val);
    x = dense_forward(trained.layer.encoder, x);
    if (validation.features != nullptr) x_val = dense_forward(trained.layer.encoder, x_val);
    result.model.layers.push_back(std::move(trained.layer));
    result.layer_histories.push_back(std::move(trained.history));
  }

  Rng classifier_rng = rng.split();
  const ClassWeights clf_weights = cfg.classifier_class_weights
                                       ? prepared.weights
                                       : ClassWeights::uniform(labels.n_heads());
  const Validation val{validation.features != nullptr ? &x_val : nullptr, validation.labels};
  ClassifierTrainResult clf = train_classifier(x, prepared.labels, clf_weights, cfg,
                                               classifier_rng, classifier_hidden, val);
  result.model.classifier = std::move(clf.classifier);
  result.classifier_history = std::move(clf.history);
  return result;
}

}  // namespace

StackTrainResult stack_train(const Matrix& x0, const HeadLabels& labels,
                             const std::vector<QaeLayerSpec>& specs, const TrainConfig& cfg,
                             Rng& rng, const Validation& validation) {
  if (specs.empty()) {
    throw ConfigError("stack_train needs at least one layer spec");
  }
  return train_pipeline(x0, labels, specs, cfg.combiner, {}, cfg, rng, validation);
}

StackTrainResult train_model(const ModelKind& kind, const Matrix& x0, const HeadLabels& labels,
                             const std::vector<std::size_t>& hidden_dims,
                             const TrainConfig& cfg, Rng& rng, const Validation& validation) {
  const auto specs = chain_specs(x0.cols(), kind.pretrain_dims(hidden_dims), 2 * labels.n_heads());
  const LossCombiner combiner = kind.pretraining == Pretraining::plain
                                    ? LossCombiner::reconstruction_only
                                    : cfg.combiner;
  const std::vector<std::size_t> clf_hidden =
      kind.classifier == ClassifierKind::mlp ? cfg.mlp_hidden : std::vector<std::size_t>{};
  return train_pipeline(x0, labels, specs, combiner, clf_hidden, cfg, rng, validation);
}

StackTrainResult train_baseline(BaselineKind kind, const Matrix& x0, const HeadLabels& labels,
                                const std::vector<std::size_t>& hidden_dims,
                                const TrainConfig& cfg, Rng& rng, ClassifierKind classifier) {
  switch (kind) {
    case BaselineKind::logistic:
      return train_model({Pretraining::none, false, ClassifierKind::logistic}, x0, labels, {},
                         cfg, rng);
    case BaselineKind::mlp:
      return train_model({Pretraining::none, false, ClassifierKind::mlp}, x0, labels, {}, cfg,
                         rng);
    case BaselineKind::plain_stacked_ae:
      return train_model({Pretraining::plain, true, classifier}, x0, labels, hidden_dims, cfg,
                         rng);
  }
  throw InternalError("unhandled baseline kind");
}

}  // namespace softsense
