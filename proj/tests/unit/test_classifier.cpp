#include <gtest/gtest.h>

#include <random>

#include "terraprop/segmentation/classifier.hpp"

namespace {

using namespace terraprop;
using namespace terraprop::segmentation;

const TerrainClassSet kTwo({"dust", "rock"}, {Rgb{200, 160, 120}, Rgb{60, 60, 60}});

// Two Gaussian blobs in feature space with a margin between them.
struct Separable {
  FeatureMap features{32, 32, 9};
  LabelImage labels{32, 32, 1};
};

Separable separable(std::uint64_t seed) {
  Separable s;
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> noise(0.0f, 0.04f);
  for (std::size_t i = 0; i < s.labels.pixel_count(); ++i) {
    const int y = (i * 7 + i / 5) % 2;
    s.labels.data()[i] = static_cast<std::uint8_t>(y);
    auto f = s.features.pixel(i);
    for (int k = 0; k < 9; ++k) f[k] = 0.5f + noise(rng);
    f[0] += y ? 0.2f : -0.2f;
    f[4] += y ? -0.1f : 0.1f;
  }
  return s;
}

double accuracy(const LabelImage& pred, const LabelImage& truth) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) ok += pred.data()[i] == truth.data()[i];
  return double(ok) / pred.pixel_count();
}

// Independent reference: classify by nearest class centroid.
LabelImage nearest_centroid(const Separable& s) {
  std::vector<double> mean(2 * 9, 0.0);
  std::vector<int> count(2, 0);
  for (std::size_t i = 0; i < s.labels.pixel_count(); ++i) {
    const int y = s.labels.data()[i];
    ++count[y];
    for (int k = 0; k < 9; ++k) mean[y * 9 + k] += s.features.pixel(i)[k];
  }
  for (int y = 0; y < 2; ++y)
    for (int k = 0; k < 9; ++k) mean[y * 9 + k] /= count[y];
  LabelImage out(s.labels.height(), s.labels.width(), 1);
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    double d[2] = {0, 0};
    for (int y = 0; y < 2; ++y)
      for (int k = 0; k < 9; ++k) {
        const double e = s.features.pixel(i)[k] - mean[y * 9 + k];
        d[y] += e * e;
      }
    out.data()[i] = d[1] < d[0];
  }
  return out;
}

TEST(Classifier, LearnsSeparableData) {
  const auto s = separable(1);
  ASSERT_GE(accuracy(nearest_centroid(s), s.labels), 0.99);  // the data really is separable
  const auto r = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, {});
  const auto pred = argmax_labels(predict_probabilities(r.classifier, s.features));
  EXPECT_GE(accuracy(pred, s.labels), 0.99);
  EXPECT_LT(r.final_loss, r.loss_history.front());
  EXPECT_FALSE(r.single_class);
}

TEST(Classifier, ZeroEpochsReturnsZeroWeights) {
  const auto s = separable(2);
  TrainingHyperparams hyper;
  hyper.epochs = 0;
  const auto r = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, hyper);
  EXPECT_EQ(r.classifier, PixelClassifier::zeros(kTwo, {}));
  const auto p = predict_probabilities(r.classifier, s.features);
  for (float v : p.data()) EXPECT_FLOAT_EQ(v, 0.5f);
}

TEST(Classifier, DeterministicAcrossRunsAndThreads) {
  const auto s = separable(3);
  TrainingHyperparams hyper;
  hyper.epochs = 60;
  hyper.init_scale = 0.01;
  hyper.seed = 17;
  const auto a = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, hyper, 1);
  const auto b = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, hyper, 1);
  const auto c = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, hyper, 4);
  EXPECT_EQ(a.classifier.weights(), b.classifier.weights());
  EXPECT_EQ(a.classifier.weights(), c.classifier.weights());
  EXPECT_EQ(a.loss_history, c.loss_history);
}

TEST(Classifier, LossHistoryIsNonIncreasingAtDefaultStep) {
  const auto s = separable(4);
  TrainingHyperparams hyper;
  hyper.epochs = 100;
  const auto r = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, hyper);
  ASSERT_EQ(r.loss_history.size(), 101u);
  for (std::size_t e = 1; e < r.loss_history.size(); ++e) {
    EXPECT_LE(r.loss_history[e], r.loss_history[e - 1] + 1e-12) << e;
  }
}

TEST(Classifier, IgnoredPixelsAreNotFitted) {
  auto s = separable(5);
  // Flip the labels of ignored pixels' features: they must not matter.
  auto masked = s.labels;
  for (std::size_t i = 0; i < masked.pixel_count(); i += 3) masked.data()[i] = kIgnoreLabel;
  auto scrambled = s.features;
  for (std::size_t i = 0; i < masked.pixel_count(); i += 3) scrambled.pixel(i)[0] = 1.0f;
  TrainingHyperparams hyper;
  hyper.epochs = 30;
  // Standardisation uses scored pixels only, so the two runs see identical data.
  const auto a = train_classifier(s.features, masked, ClassWeights::uniform(2), kTwo, {}, hyper);
  const auto b = train_classifier(scrambled, masked, ClassWeights::uniform(2), kTwo, {}, hyper);
  EXPECT_EQ(a.classifier.weights(), b.classifier.weights());
}

TEST(Classifier, ProbabilitiesSumToOne) {
  const auto s = separable(6);
  std::vector<double> w(3 * 10);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 3.0);
  for (auto& v : w) v = n(rng);
  const TerrainClassSet three({"a", "b", "c"}, {Rgb{1, 1, 1}, Rgb{2, 2, 2}, Rgb{3, 3, 3}});
  const PixelClassifier clf(three, {}, w);
  const auto p = predict_probabilities(clf, s.features, 2);
  for (std::size_t i = 0; i < p.pixel_count(); ++i) {
    double sum = 0;
    for (float v : p.pixel(i)) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(Classifier, SingleClassDataIsFlagged) {
  auto s = separable(7);
  for (auto& v : s.labels.data()) v = 1;
  TrainingHyperparams hyper;
  hyper.epochs = 5;
  const auto r = train_classifier(s.features, s.labels, ClassWeights::uniform(2), kTwo, {}, hyper);
  EXPECT_TRUE(r.single_class);
}

TEST(Classifier, ArgmaxTiesGoToLowerIndex) {
  ProbabilityMap p(1, 2, 3);
  p.data() = {0.4f, 0.4f, 0.2f, 0.1f, 0.45f, 0.45f};
  const auto l = argmax_labels(p);
  EXPECT_EQ(l(0, 0), 0);
  EXPECT_EQ(l(0, 1), 1);
}

TEST(Classifier, RejectsMalformedWeights) {
  EXPECT_THROW(PixelClassifier(kTwo, {}, std::vector<double>(19, 0.0)), std::invalid_argument);
}

}  // namespace
