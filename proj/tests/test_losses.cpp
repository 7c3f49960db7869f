#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "softsense/errors.hpp"
#include "softsense/gradcheck.hpp"
#include "softsense/losses.hpp"
#include "softsense/rng.hpp"

using namespace softsense;

namespace {

HeadLabels single_head(std::size_t negatives, std::size_t positives) {
  HeadLabels labels(negatives + positives, 1);
  for (std::size_t i = 0; i < negatives + positives; ++i) {
    labels(i, 0) = i < negatives ? Label::negative : Label::positive;
  }
  return labels;
}

HeadLabels random_labels(std::size_t n, std::size_t heads, Rng& rng) {
  HeadLabels labels(n, heads);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < heads; ++j) {
      const double u = rng.uniform();
      labels(i, j) = u < 0.3 ? Label::missing : (u < 0.65 ? Label::negative : Label::positive);
    }
    if (!labels.observed(i, 0) && !(heads > 1 && labels.observed(i, 1))) {
      labels(i, 0) = Label::positive;
    }
  }
  return labels;
}

}  // namespace

TEST(Mse, IdenticalIsZero) {
  const Matrix x{{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_EQ(mse_loss(x, x).loss, 0.0);
}

TEST(Mse, HandValue) {
  EXPECT_EQ(mse_loss(Matrix{{1.0, 1.0}}, Matrix{{0.0, 0.0}}).loss, 2.0);
}

TEST(Mse, GradientMatchesFiniteDifferences) {
  Rng rng(4);
  Matrix x(5, 3), x_hat(5, 3);
  for (double& v : x.values()) v = rng.normal();
  for (double& v : x_hat.values()) v = rng.normal();
  const LossGrad lg = mse_loss(x, x_hat);
  const auto fd =
      finite_difference_grad([&] { return mse_loss(x, x_hat).loss; }, x_hat.values(), 1e-5);
  EXPECT_LE(max_relative_error(lg.grad.values(), fd), 1e-6);
  EXPECT_THROW(mse_loss(x, Matrix(5, 2)), ShapeError);
}

TEST(BinaryCe, Values) {
  EXPECT_NEAR(binary_ce(1, 1.0), 0.0, 1e-11);
  EXPECT_NEAR(binary_ce(1, 0.5), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(binary_ce(0, 0.5), std::numbers::ln2, 1e-15);
  EXPECT_TRUE(std::isfinite(binary_ce(1, 0.0)));
  EXPECT_NEAR(binary_ce(1, 0.0), -std::log(kProbClip), 1e-9);
}

TEST(ClassWeights, BalancedSingleHead) {
  const ClassWeights w = class_weights(single_head(50, 50));
  EXPECT_EQ(w.per_head[0][0], 1.0);
  EXPECT_EQ(w.per_head[0][1], 1.0);
}

TEST(ClassWeights, ImbalancedSingleHead) {
  const ClassWeights w = class_weights(single_head(90, 10));
  EXPECT_NEAR(w.per_head[0][0], 0.5556, 5e-5);
  EXPECT_DOUBLE_EQ(w.per_head[0][0], 100.0 / 180.0);
  EXPECT_EQ(w.per_head[0][1], 5.0);
}

TEST(ClassWeights, TwoHeadsUseGlobalCounts) {
  HeadLabels labels(100, 2);
  for (std::size_t i = 0; i < 100; ++i) {
    if (i < 40) labels(i, 0) = Label::negative;
    else if (i < 50) labels(i, 0) = Label::positive;
    labels(i, 1) = i % 2 ? Label::positive : Label::negative;
  }
  const ClassWeights w = class_weights(labels);
  EXPECT_EQ(w.per_head[0][0], 0.625);
  EXPECT_EQ(w.per_head[0][1], 2.5);
}

TEST(ClassWeights, AbsentClassGetsZeroAndEmptyIsError) {
  const ClassWeights w = class_weights(single_head(0, 10));
  EXPECT_EQ(w.per_head[0][0], 0.0);
  EXPECT_GT(w.per_head[0][1], 0.0);
  EXPECT_THROW(class_weights(HeadLabels()), ConfigError);
}

// Each class contributes the same total weight within a head.
TEST(ClassWeights, EqualClassMassProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t heads = 1 + rng.uniform_index(5);
    const HeadLabels labels = random_labels(20 + rng.uniform_index(300), heads, rng);
    const ClassWeights w = class_weights(labels);
    for (std::size_t j = 0; j < heads; ++j) {
      const auto n = labels.class_counts(j);
      if (n[0] == 0 || n[1] == 0) continue;
      const double a = w.per_head[j][0] * static_cast<double>(n[0]);
      const double b = w.per_head[j][1] * static_cast<double>(n[1]);
      const double exact = static_cast<double>(labels.n_samples()) / (2.0 * heads);
      EXPECT_NEAR(a, b, 4e-16 * exact);
      EXPECT_NEAR(a, exact, 4e-16 * exact);
    }
  }
}

TEST(HeadSoftmax, PairsSumToOne) {
  const Matrix p = head_softmax(Matrix{{0.0, 0.0, 3.0, -1.0}});
  EXPECT_EQ(p(0, 0), 0.5);
  EXPECT_EQ(p(0, 1), 0.5);
  EXPECT_NEAR(p(0, 2) + p(0, 3), 1.0, 1e-15);
  EXPECT_GT(p(0, 2), p(0, 3));
}

TEST(MultiheadCe, PerfectPredictionsNearZero) {
  const HeadLabels labels = single_head(3, 2);
  Matrix probs(5, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    const bool pos = labels(i, 0) == Label::positive;
    probs(i, 0) = pos ? 0.0 : 1.0;
    probs(i, 1) = pos ? 1.0 : 0.0;
  }
  const ClassWeights w = class_weights(labels);
  const double max_w = std::max(w.per_head[0][0], w.per_head[0][1]);
  EXPECT_LE(multihead_weighted_ce(labels, probs, w).loss, 5 * 2 * kProbClip * max_w);
}

TEST(MultiheadCe, SingleSampleReducesToBinaryCe) {
  HeadLabels labels(1, 1);
  labels(0, 0) = Label::positive;
  const LossGrad lg = multihead_weighted_ce(labels, Matrix{{0.5, 0.5}}, ClassWeights::uniform(1));
  EXPECT_NEAR(lg.loss, std::numbers::ln2, 1e-15);
}

TEST(MultiheadCe, UnitWeightsEqualMeanBinaryCe) {
  Rng rng(12);
  HeadLabels labels(30, 1);
  Matrix probs(30, 2);
  double mean = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    const int y = rng.bernoulli(0.4) ? 1 : 0;
    labels(i, 0) = y ? Label::positive : Label::negative;
    const double p1 = rng.uniform(0.01, 0.99);
    probs(i, 0) = 1.0 - p1;
    probs(i, 1) = p1;
    mean += binary_ce(y, p1) / 30.0;
  }
  EXPECT_NEAR(multihead_weighted_ce(labels, probs, ClassWeights::uniform(1)).loss, mean, 1e-12);
}

TEST(MultiheadCe, LinearInWeights) {
  Rng rng(13);
  const HeadLabels labels = random_labels(12, 3, rng);
  Matrix logits(12, 6);
  for (double& v : logits.values()) v = rng.normal();
  const Matrix probs = head_softmax(logits);
  const ClassWeights w = class_weights(labels);
  ClassWeights scaled = w;
  for (auto& pair : scaled.per_head) {
    pair[0] *= 3.5;
    pair[1] *= 3.5;
  }
  const double base = multihead_weighted_ce(labels, probs, w).loss;
  EXPECT_NEAR(multihead_weighted_ce(labels, probs, scaled).loss, 3.5 * base, 1e-12 * base);
}

TEST(MultiheadCe, GradientsMatchFiniteDifferences) {
  Rng rng(14);
  const HeadLabels labels = random_labels(4, 2, rng);
  const ClassWeights w = class_weights(labels);
  Matrix logits(4, 4);
  for (double& v : logits.values()) v = rng.normal();
  Matrix probs = head_softmax(logits);

  // w.r.t. probabilities, masked entries exactly zero
  const LossGrad lg = multihead_weighted_ce(labels, probs, w);
  const auto fd_p = finite_difference_grad(
      [&] { return multihead_weighted_ce(labels, probs, w).loss; }, probs.values(), 1e-6);
  EXPECT_LE(max_relative_error(lg.grad.values(), fd_p), 1e-4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (labels.observed(i, j)) continue;
      EXPECT_EQ(lg.grad(i, 2 * j), 0.0);
      EXPECT_EQ(lg.grad(i, 2 * j + 1), 0.0);
    }
  }

  // w.r.t. logits: fused form, chain rule through the softmax, and differences
  const LogitLoss fused = multihead_weighted_ce_logits(labels, logits, w);
  EXPECT_NEAR(fused.loss, lg.loss, 1e-12);
  const Matrix chained = head_softmax_backward(probs, lg.grad);
  EXPECT_LE(max_relative_error(fused.grad_logits.values(), chained.values()), 1e-10);
  const auto fd_z = finite_difference_grad(
      [&] { return multihead_weighted_ce_logits(labels, logits, w).loss; }, logits.values(),
      1e-5);
  EXPECT_LE(max_relative_error(fused.grad_logits.values(), fd_z), 1e-4);
}

TEST(MultiheadCe, HeadCountMismatchIsConfigError) {
  const HeadLabels labels = single_head(2, 2);
  EXPECT_THROW(multihead_weighted_ce(labels, Matrix(4, 2), ClassWeights::uniform(2)),
               ConfigError);
  EXPECT_THROW(multihead_weighted_ce(labels, Matrix(4, 4), ClassWeights::uniform(1)),
               ShapeError);
}

TEST(CombinedVariance, UnitVariances) {
  const CombinedLoss c = combined_loss_variance(2.0, 3.0, VarianceParams{});
  EXPECT_EQ(c.loss, 4.0);
}

TEST(CombinedVariance, GradientsMatchFiniteDifferences) {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const double jx = rng.uniform(0.01, 5.0);
    const double jy = rng.uniform(0.01, 5.0);
    std::vector<double> s{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    auto loss = [&] { return combined_loss_variance(jx, jy, {s[0], s[1]}).loss; };
    const CombinedLoss c = combined_loss_variance(jx, jy, {s[0], s[1]});
    const auto fd = finite_difference_grad(loss, s, 1e-5);
    const std::vector<double> analytic{c.grad_s1, c.grad_s2};
    EXPECT_LE(max_relative_error(analytic, fd), 1e-6);

    std::vector<double> terms{jx, jy};
    const auto fd_terms = finite_difference_grad(
        [&] { return combined_loss_variance(terms[0], terms[1], {s[0], s[1]}).loss; }, terms,
        1e-5);
    const std::vector<double> d_terms{c.d_recon, c.d_pred};
    EXPECT_LE(max_relative_error(d_terms, fd_terms), 1e-6);
  }
}

// Minimizers of J_x/(2σ₁²) + ln σ₁ and J_y/σ₂² + ln σ₂ are σ₁² = J_x and σ₂² = 2·J_y.
TEST(CombinedVariance, GradientDescentFindsStationaryPoints) {
  VarianceParams v;
  for (int i = 0; i < 2000; ++i) {
    const CombinedLoss c = combined_loss_variance(2.0, 3.0, v);
    v.log_var_recon -= 0.5 * c.grad_s1;
    v.log_var_pred -= 0.5 * c.grad_s2;
  }
  EXPECT_NEAR(v.sigma1_sq(), 2.0, 1e-3);
  EXPECT_NEAR(v.sigma2_sq(), 6.0, 1e-3);
}

TEST(CombinedVariance, CanBeNegative) {
  EXPECT_LT(combined_loss_variance(0.01, 0.01, {std::log(0.01), std::log(0.02)}).loss, 0.0);
}

TEST(CombinedNaive, Values) {
  EXPECT_EQ(combined_loss_naive(2.0, 3.0, 1.0), 2.0);
  EXPECT_EQ(combined_loss_naive(2.0, 3.0, 0.0), 3.0);
  EXPECT_EQ(combined_loss_naive(2.0, 3.0, 0.5), 2.5);
  EXPECT_THROW(combined_loss_naive(2.0, 3.0, 1.5), ConfigError);
  EXPECT_THROW(combined_loss_naive(2.0, 3.0, -0.1), ConfigError);
}

TEST(HeadTargets, ComplementaryUnits) {
  Rng rng(16);
  const HeadLabels labels = random_labels(50, 3, rng);
  const HeadTargets t = encode_head_targets(labels);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (labels.observed(i, j)) {
        EXPECT_EQ(t.targets(i, 2 * j), 1.0 - t.targets(i, 2 * j + 1));
        EXPECT_EQ(t.targets(i, 2 * j + 1), labels(i, j) == Label::positive ? 1.0 : 0.0);
        EXPECT_EQ(t.mask(i, 2 * j), 1.0);
      } else {
        EXPECT_EQ(t.mask(i, 2 * j) + t.mask(i, 2 * j + 1), 0.0);
      }
    }
  }
}
