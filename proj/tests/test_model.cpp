#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "softsense/dataset.hpp"
#include "softsense/errors.hpp"
#include "softsense/gradcheck.hpp"
#include "softsense/metrics.hpp"
#include "softsense/model.hpp"
#include "softsense/params.hpp"
#include "softsense/synthetic.hpp"
#include "softsense/training.hpp"

using namespace softsense;

namespace {

HeadLabels random_labels(std::size_t n, std::size_t heads, Rng& rng) {
  HeadLabels labels(n, heads);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < heads; ++j) {
      const double u = rng.uniform();
      labels(i, j) = u < 0.25 ? Label::missing : (u < 0.6 ? Label::negative : Label::positive);
    }
    if (!labels.observed(i, 0)) labels(i, 0) = Label::negative;
  }
  return labels;
}

Matrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

std::vector<std::span<double>> layer_params(QaeLayer& layer) {
  std::vector<std::span<double>> out;
  for (DenseLayer* d : {&layer.encoder, &layer.decoder_x, &layer.decoder_y}) {
    out.emplace_back(d->weights.values());
    out.emplace_back(d->bias);
  }
  out.emplace_back(&layer.variance.log_var_recon, 1);
  out.emplace_back(&layer.variance.log_var_pred, 1);
  return out;
}

std::vector<double> flatten(const QaeGradients& g) {
  std::vector<double> out;
  for (const DenseGradients* d : {&g.encoder, &g.decoder_x, &g.decoder_y}) {
    out.insert(out.end(), d->weights.values().begin(), d->weights.values().end());
    out.insert(out.end(), d->bias.begin(), d->bias.end());
  }
  out.push_back(g.grad_s1);
  out.push_back(g.grad_s2);
  return out;
}

// Pre-activations near zero make relu finite differences straddle the kink.
bool relu_kink_nearby(const QaeLayer& layer, const Matrix& x) {
  DenseCache cache;
  dense_forward(layer.encoder, x, &cache);
  return std::ranges::any_of(cache.pre_activation.values(),
                             [](double v) { return std::abs(v) < 1e-3; });
}

Dataset toy_fixture(std::size_t n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_samples = n;
  spec.n_features = 16;
  spec.latent_rank = 4;
  spec.imbalance_ratios = {2.0, 4.0};
  spec.observation_rates = {0.8};
  Rng rng(seed);
  Dataset ds = generate_synthetic(spec, rng);
  ds.features = standardize_apply(standardize_fit(ds.features), ds.features);
  return ds;
}

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.batch_size = 64;
  cfg.max_epochs = 30;
  cfg.learning_rate = 3e-3;
  cfg.mlp_hidden = {8};
  return cfg;
}

double mean_recall(const Prediction& pred, const HeadLabels& labels) {
  const auto rp = recall_precision(confusion(labels, pred.hard));
  double sum = 0.0;
  for (const auto& h : rp) sum += h.recall.value_or(0.0);
  return sum / static_cast<double>(rp.size());
}

double median(std::vector<double> v) {
  std::ranges::sort(v);
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST(QaeForward, ZeroWeightsGiveHalf) {
  QaeLayer layer({5, 3, 6});
  const QaeOutput out = qae_forward(layer, Matrix(4, 5, 1.0));
  for (double p : out.head_probs.values()) EXPECT_EQ(p, 0.5);
}

TEST(QaeForward, ShapeContract) {
  Rng rng(1);
  QaeLayer layer({7, 3, 4});
  layer.initialize(rng);
  const QaeOutput out = qae_forward(layer, gaussian(9, 7, rng));
  EXPECT_EQ(out.hidden.rows(), 9u);
  EXPECT_EQ(out.hidden.cols(), 3u);
  EXPECT_EQ(out.reconstruction.rows(), 9u);
  EXPECT_EQ(out.reconstruction.cols(), 7u);
  EXPECT_EQ(out.head_probs.cols(), 4u);
  EXPECT_THROW(qae_forward(layer, Matrix(9, 6)), ShapeError);
  EXPECT_THROW(QaeLayer({7, 3, 5}), ConfigError);
  EXPECT_THROW(QaeLayer({0, 3, 4}), ConfigError);
}

TEST(QaeLoss, JointGradientOnToyLayer) {
  Rng rng(2);
  QaeLayer layer({6, 4, 4});
  Matrix x;
  do {
    layer.initialize(rng);
    x = gaussian(4, 6, rng);
  } while (relu_kink_nearby(layer, x));
  layer.variance = {0.3, -0.4};
  const HeadLabels labels = random_labels(4, 2, rng);
  const ClassWeights w = class_weights(labels);
  QaeGradients grads;
  qae_loss(layer, x, labels, w, {}, &grads);
  std::vector<double> fd;
  for (auto block : layer_params(layer)) {
    const auto g = finite_difference_grad(
        [&] { return qae_loss(layer, x, labels, w, {}).loss; }, block, 1e-6);
    fd.insert(fd.end(), g.begin(), g.end());
  }
  EXPECT_LE(max_relative_error(flatten(grads), fd), 1e-4);
}

TEST(QaeLoss, JointGradientRandomConfigurations) {
  Rng rng(3);
  int checked = 0;
  for (int trial = 0; checked < 40 && trial < 400; ++trial) {
    const std::size_t in = 1 + rng.uniform_index(8);
    const std::size_t hidden = 1 + rng.uniform_index(8);
    const std::size_t heads = 1 + rng.uniform_index(4);
    const std::size_t n = 1 + rng.uniform_index(8);
    QaeLayer layer({in, hidden, 2 * heads});
    layer.initialize(rng);
    for (double& b : layer.encoder.bias) b = 0.1 * rng.normal();
    const Matrix x = gaussian(n, in, rng);
    if (relu_kink_nearby(layer, x)) continue;
    layer.variance = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const HeadLabels labels = random_labels(n, heads, rng);
    const ClassWeights w = class_weights(labels);
    const LossSettings settings = trial % 3 == 0
                                      ? LossSettings{LossCombiner::naive, rng.uniform()}
                                      : LossSettings{};
    QaeGradients grads;
    qae_loss(layer, x, labels, w, settings, &grads);
    std::vector<double> fd;
    for (auto block : layer_params(layer)) {
      const auto g = finite_difference_grad(
          [&] { return qae_loss(layer, x, labels, w, settings).loss; }, block, 1e-6);
      fd.insert(fd.end(), g.begin(), g.end());
    }
    EXPECT_LE(max_relative_error(flatten(grads), fd), 1e-4)
        << in << "x" << hidden << " heads " << heads << " n " << n;
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(QaeLoss, ReconstructionOnlyIgnoresLabels) {
  Rng rng(4);
  QaeLayer layer({5, 3, 2});
  layer.initialize(rng);
  const Matrix x = gaussian(6, 5, rng);
  const HeadLabels a = random_labels(6, 1, rng);
  const HeadLabels b = random_labels(6, 1, rng);
  const LossSettings s{LossCombiner::reconstruction_only, 0.5};
  const auto la = qae_loss(layer, x, a, class_weights(a), s);
  const auto lb = qae_loss(layer, x, b, class_weights(b), s);
  EXPECT_EQ(la.loss, lb.loss);
  EXPECT_EQ(la.loss, mse_loss(x, qae_forward(layer, x).reconstruction).loss);
}

TEST(TrainQae, LowRankReconstructionVanishes) {
  Rng rng(5);
  const Matrix x = matmul(gaussian(200, 2, rng), gaussian(2, 8, rng));
  HeadLabels labels(200, 1, Label::positive);
  TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.learning_rate = 3e-3;
  cfg.max_epochs = 500;
  cfg.early_stop_min_delta = 0.0;
  cfg.patience = 500;
  Rng train_rng(6);
  const QaeTrainResult r = train_qae_layer(x, labels, class_weights(labels), {8, 8, 2}, cfg,
                                           train_rng);
  EXPECT_LE(r.history.size(), 500u);
  EXPECT_LE(r.history.back().recon, 1e-3);
}

TEST(TrainQae, DeterministicAndHistoryShape) {
  const Dataset ds = toy_fixture(300, 7);
  TrainConfig cfg = quick_config();
  const ClassWeights w = class_weights(ds.labels);
  Rng a(8), b(8);
  const auto ra = train_qae_layer(ds.features, ds.labels, w, {16, 6, 4}, cfg, a);
  const auto rb = train_qae_layer(ds.features, ds.labels, w, {16, 6, 4}, cfg, b);
  EXPECT_EQ(ra.layer, rb.layer);
  ASSERT_FALSE(ra.history.empty());
  for (std::size_t e = 0; e < ra.history.size(); ++e) {
    EXPECT_EQ(ra.history[e].epoch, e + 1);
    EXPECT_EQ(ra.history[e].updates, (e + 1) * 5);
    EXPECT_EQ(ra.history[e].loss, rb.history[e].loss);
  }
}

TEST(TrainQae, VarianceWeightedLossMayGoNegative) {
  const Dataset ds = toy_fixture(400, 9);
  TrainConfig cfg = quick_config();
  cfg.max_epochs = 150;
  cfg.learning_rate = 1e-2;
  Rng rng(10);
  const auto r = train_qae_layer(ds.features, ds.labels, class_weights(ds.labels), {16, 12, 4},
                                 cfg, rng);
  EXPECT_LT(r.history.back().loss, 0.0);
  EXPECT_TRUE(std::isfinite(r.history.back().loss));
}

TEST(TrainQae, EarlyStoppingHonoursPatience) {
  const Dataset ds = toy_fixture(200, 11);
  TrainConfig cfg = quick_config();
  cfg.max_epochs = 1000;
  cfg.early_stop_min_delta = 1e9;
  cfg.patience = 3;
  Rng rng(12);
  const auto r = train_qae_layer(ds.features, ds.labels, class_weights(ds.labels), {16, 4, 4},
                                 cfg, rng);
  EXPECT_EQ(r.history.size(), 4u);
  cfg.max_epochs = 0;
  Rng rng2(12);
  EXPECT_TRUE(train_qae_layer(ds.features, ds.labels, class_weights(ds.labels), {16, 4, 4}, cfg,
                              rng2)
                  .history.empty());
}

TEST(TrainQae, DivergenceReportsEpochAndBatch) {
  const Dataset ds = toy_fixture(200, 13);
  Matrix x = ds.features;
  x(150, 3) = std::numeric_limits<double>::infinity();
  TrainConfig cfg = quick_config();
  Rng rng(14);
  try {
    train_qae_layer(x, ds.labels, class_weights(ds.labels), {16, 4, 4}, cfg, rng);
    FAIL() << "expected a numeric error";
  } catch (const NumericError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numeric);
    EXPECT_EQ(e.epoch(), 1u);
    EXPECT_LT(e.batch(), 4u);
  }
}

// Minibatch noise aside, the full-set objective should keep falling.
TEST(TrainQae, FullSetLossMostlyNonIncreasing) {
  SyntheticSpec spec;
  Rng data_rng(15);
  Dataset ds = generate_synthetic(spec, data_rng);
  ds.features = standardize_apply(standardize_fit(ds.features), ds.features);
  TrainConfig cfg;
  cfg.max_epochs = 60;
  Rng rng(16);
  const auto r = train_qae_layer(ds.features, ds.labels, class_weights(ds.labels),
                                 {64, 32, 8}, cfg, rng);
  std::size_t ok = 0;
  for (std::size_t e = 1; e < r.history.size(); ++e) {
    ok += r.history[e].loss <= r.history[e - 1].loss + cfg.early_stop_min_delta;
  }
  ASSERT_GT(r.history.size(), 20u);
  EXPECT_GE(static_cast<double>(ok) / static_cast<double>(r.history.size() - 1), 0.95);
}

TEST(Stack, FourLayerWidths) {
  const auto specs = chain_specs(632, {400, 200, 100, 50}, 16);
  ASSERT_EQ(specs.size(), 4u);
  Rng rng(17);
  StackedModel model;
  for (const auto& s : specs) {
    model.layers.emplace_back(s);
    model.layers.back().initialize(rng);
  }
  model.classifier = HeadClassifier(50, {}, 16);
  Matrix h = gaussian(3, 632, rng);
  const std::vector<std::size_t> expected{400, 200, 100, 50};
  for (std::size_t k = 0; k < 4; ++k) {
    h = qae_forward(model.layers[k], h).hidden;
    EXPECT_EQ(h.cols(), expected[k]);
  }
  EXPECT_EQ(encode(model, gaussian(3, 632, rng)).cols(), 50u);
  EXPECT_EQ(model.latent_dim(), 50u);
  EXPECT_EQ(model.parameter_count(), 730562u);
}

TEST(Stack, ChainMismatchIsConfigError) {
  const Dataset ds = toy_fixture(100, 18);
  Rng rng(19);
  EXPECT_THROW(stack_train(ds.features, ds.labels, {{16, 8, 4}, {7, 4, 4}}, quick_config(), rng),
               ConfigError);
  EXPECT_THROW(stack_train(ds.features, ds.labels, {{16, 8, 6}}, quick_config(), rng),
               ConfigError);
}

TEST(Stack, DeeperLayersNeverTouchEarlierOnes) {
  const Dataset ds = toy_fixture(300, 20);
  Rng a(21), b(21);
  const auto one = stack_train(ds.features, ds.labels, {{16, 8, 4}}, quick_config(), a);
  const auto two =
      stack_train(ds.features, ds.labels, {{16, 8, 4}, {8, 4, 4}}, quick_config(), b);
  EXPECT_EQ(one.model.layers[0], two.model.layers[0]);
}

TEST(Stack, OneLayerIsLayerPlusClassifier) {
  const Dataset ds = toy_fixture(300, 22);
  const TrainConfig cfg = quick_config();
  Rng rng(23);
  const auto stacked = stack_train(ds.features, ds.labels, {{16, 8, 4}}, cfg, rng);

  Rng manual(23);
  manual.split();
  Rng layer_rng = manual.split();
  Rng clf_rng = manual.split();
  const ClassWeights w = class_weights(ds.labels);
  const auto layer = train_qae_layer(ds.features, ds.labels, w, {16, 8, 4}, cfg, layer_rng);
  EXPECT_EQ(layer.layer, stacked.model.layers[0]);
  const Matrix latent = encode(stacked.model, ds.features);
  EXPECT_EQ(latent, encode(stacked.model, ds.features));
  const auto clf = train_classifier(latent, ds.labels, w, cfg, clf_rng);
  EXPECT_EQ(clf.classifier, stacked.model.classifier);
}

TEST(Stack, PlainAutoencoderIgnoresLabels) {
  const Dataset ds = toy_fixture(300, 24);
  HeadLabels shuffled = ds.labels;
  Rng perm_rng(25);
  for (std::size_t i = shuffled.n_samples() - 1; i > 0; --i) {
    const std::size_t k = perm_rng.uniform_index(i + 1);
    for (std::size_t j = 0; j < shuffled.n_heads(); ++j) {
      std::swap(shuffled(i, j), shuffled(k, j));
    }
  }
  ASSERT_NE(shuffled, ds.labels);
  Rng a(26), b(26);
  const auto ra = train_baseline(BaselineKind::plain_stacked_ae, ds.features, ds.labels, {8, 4},
                                 quick_config(), a);
  const auto rb = train_baseline(BaselineKind::plain_stacked_ae, ds.features, shuffled, {8, 4},
                                 quick_config(), b);
  ASSERT_EQ(ra.model.layers.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(ra.model.layers[k].encoder, rb.model.layers[k].encoder);
  }
}

TEST(Stack, LatentSupportsBaselineRecall) {
  std::vector<double> stack_recall, raw_recall;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset ds = toy_fixture(1500, 100 + seed);
    const DatasetSplit s = split(ds, {0.7, 0.0, 0.3}, seed);
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 60;
    Rng a(seed), b(seed);
    const auto stacked = stack_train(s.train.features, s.train.labels,
                                     chain_specs(16, {12, 8}, 4), cfg, a);
    const auto raw = train_baseline(BaselineKind::logistic, s.train.features, s.train.labels, {},
                                    cfg, b);
    stack_recall.push_back(mean_recall(predict(stacked.model, s.test.features), s.test.labels));
    raw_recall.push_back(mean_recall(predict(raw.model, s.test.features), s.test.labels));
  }
  EXPECT_GE(median(stack_recall), median(raw_recall));
}

TEST(Classifier, SeparableBlobs) {
  Rng rng(27);
  Matrix x(400, 2);
  HeadLabels labels(400, 1);
  for (std::size_t i = 0; i < 400; ++i) {
    const bool pos = i % 4 == 0;
    x(i, 0) = (pos ? 3.0 : -3.0) + rng.normal();
    x(i, 1) = rng.normal();
    labels(i, 0) = pos ? Label::positive : Label::negative;
  }
  TrainConfig cfg;
  cfg.batch_size = 32;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 100;
  Rng clf_rng(28);
  const auto r = train_classifier(x, labels, class_weights(labels), cfg, clf_rng);
  EXPECT_EQ(r.classifier.parameter_count(), 3u * 2u);
  StackedModel model;
  model.classifier = r.classifier;
  EXPECT_GE(mean_recall(predict(model, x), labels), 0.99);

  Rng base_rng(29);
  const auto base = train_baseline(BaselineKind::logistic, x, labels, {}, cfg, base_rng);
  EXPECT_GE(mean_recall(predict(base.model, x), labels), 0.99);
}

TEST(Classifier, AllPositiveHead) {
  Rng rng(30);
  const Matrix x = gaussian(50, 3, rng);
  const HeadLabels labels(50, 1, Label::positive);
  TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 100;
  const auto r = train_classifier(x, labels, class_weights(labels), cfg, rng);
  StackedModel model;
  model.classifier = r.classifier;
  const Prediction p = predict(model, x);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(p.hard(i, 0), Label::positive);
}

TEST(Classifier, ZeroWeightsAreHalfAndPositive) {
  StackedModel model;
  model.classifier = HeadClassifier(3, {}, 6);
  Rng rng(31);
  const Prediction p = predict(model, gaussian(5, 3, rng));
  for (double v : p.positive_prob.values()) EXPECT_EQ(v, 0.5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(p.hard(i, j), Label::positive);
  }
}

TEST(Classifier, ProbabilitiesInOpenInterval) {
  const Dataset ds = toy_fixture(300, 32);
  Rng rng(33);
  const auto r = train_model(ModelKind::parse("SQAE+NN"), ds.features, ds.labels, {8, 4},
                             quick_config(), rng);
  const Prediction p = predict(r.model, ds.features);
  for (double v : p.positive_prob.values()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Classifier, MlpGradientMatchesFiniteDifferences) {
  Rng rng(34);
  HeadClassifier clf(4, {5, 3}, 4);
  clf.initialize(rng);
  for (auto& h : clf.hidden) {
    for (double& b : h.bias) b = 0.2 + 0.1 * rng.normal();
  }
  const Matrix x = gaussian(6, 4, rng);
  const HeadLabels labels = random_labels(6, 2, rng);
  const ClassWeights w = class_weights(labels);
  ClassifierGradients g;
  classifier_loss(clf, x, labels, w, &g);
  std::vector<double> analytic, fd;
  auto check = [&](DenseLayer& layer, const DenseGradients& lg) {
    analytic.insert(analytic.end(), lg.weights.values().begin(), lg.weights.values().end());
    analytic.insert(analytic.end(), lg.bias.begin(), lg.bias.end());
    for (std::span<double> block : {std::span<double>(layer.weights.values()),
                                    std::span<double>(layer.bias)}) {
      const auto d = finite_difference_grad(
          [&] { return classifier_loss(clf, x, labels, w); }, block, 1e-6);
      fd.insert(fd.end(), d.begin(), d.end());
    }
  };
  for (std::size_t k = 0; k < clf.hidden.size(); ++k) check(clf.hidden[k], g.hidden[k]);
  check(clf.output, g.output);
  EXPECT_LE(max_relative_error(analytic, fd), 1e-4);
}

TEST(ModelKind, NamesRoundTrip) {
  for (const char* name : {"LR", "NN", "QAE+LR", "QAE+NN", "SQAE+LR", "SQAE+NN", "AE+LR",
                           "SAE+NN"}) {
    EXPECT_EQ(ModelKind::parse(name).abbreviation(), name);
  }
  EXPECT_THROW(ModelKind::parse("XGB"), ConfigError);
  EXPECT_EQ(ModelKind::parse("SQAE+LR").pretrain_dims({32, 16}),
            (std::vector<std::size_t>{32, 16}));
  EXPECT_EQ(ModelKind::parse("QAE+LR").pretrain_dims({32, 16}), (std::vector<std::size_t>{16}));
  EXPECT_TRUE(ModelKind::parse("NN").pretrain_dims({32, 16}).empty());
}

TEST(Params, FourLayerConfiguration) {
  const ParamCounts c = count_parameters(632, {400, 200, 100, 50}, 16);
  const std::vector<std::array<std::size_t, 3>> table{
      {253200, 253432, 6416}, {80200, 80400, 3216}, {20100, 20200, 1616}, {5050, 5100, 816}};
  ASSERT_EQ(c.layers.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(c.layers[k].encoder, table[k][0]);
    EXPECT_EQ(c.layers[k].decoder_x, table[k][1]);
    EXPECT_EQ(c.layers[k].decoder_y, table[k][2]);
  }
  EXPECT_EQ(c.classifier, 816u);
  EXPECT_EQ(c.total, 730562u);
  EXPECT_EQ(c.plain_autoencoder, 717682u);
  EXPECT_EQ(c.head_overhead, 12880u);
  EXPECT_NEAR(c.overhead_ratio, 0.0179, 5e-5);
}

TEST(Params, SmallExamples) {
  EXPECT_EQ(count_parameters(2, {2}, 2).total, 24u);
  EXPECT_EQ(mlp_parameter_count(632, {100, 50}, 16), 69166u);
  EXPECT_EQ(mlp_parameter_count(50, {}, 16), 816u);
  EXPECT_THROW(count_parameters(632, {}, 16), ConfigError);
  EXPECT_THROW(count_parameters(632, {10, 0}, 16), ConfigError);
}

TEST(Params, FormulaMatchesEnumeration) {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t input = 1 + rng.uniform_index(300);
    std::vector<std::size_t> hidden(1 + rng.uniform_index(5));
    for (auto& h : hidden) h = 1 + rng.uniform_index(200);
    const std::size_t head_units = 2 * (1 + rng.uniform_index(10));

    std::size_t enumerated = 0, plain = 0;
    for (const auto& spec : chain_specs(input, hidden, head_units)) {
      const QaeLayer layer(spec);
      for (const DenseLayer* d : {&layer.encoder, &layer.decoder_x, &layer.decoder_y}) {
        const std::size_t n = d->weights.values().size() + d->bias.size();
        enumerated += n;
        if (d != &layer.decoder_y) plain += n;
      }
    }
    const HeadClassifier clf(hidden.back(), {}, head_units);
    enumerated += clf.output.weights.values().size() + clf.output.bias.size();

    const ParamCounts c = count_parameters(input, hidden, head_units);
    EXPECT_EQ(c.total, enumerated);
    EXPECT_EQ(c.plain_autoencoder, plain);
    EXPECT_EQ(c.head_overhead + c.plain_autoencoder, c.total);
  }
}
