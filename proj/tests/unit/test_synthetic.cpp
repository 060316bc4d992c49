#include <gtest/gtest.h>

#include <set>

#include "terraprop/segmentation/ratio_experiment.hpp"
#include "terraprop/segmentation/synthetic.hpp"

namespace {

using namespace terraprop;
using namespace terraprop::segmentation;

SyntheticCorpusConfig small() {
  SyntheticCorpusConfig c;
  c.width = c.height = 48;
  c.train_images = 6;
  c.test_images = 3;
  return c;
}

TEST(SyntheticCorpus, DeterministicForASeed) {
  const auto a = generate_synthetic_corpus(small());
  const auto b = generate_synthetic_corpus(small());
  ASSERT_EQ(a.train.size(), 6u);
  ASSERT_EQ(a.test.size(), 3u);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].image, b.train[i].image);
    EXPECT_EQ(a.train[i].full_labels, b.train[i].full_labels);
    EXPECT_EQ(a.train[i].partial_labels, b.train[i].partial_labels);
  }
  auto other = small();
  other.seed = 8;
  EXPECT_NE(generate_synthetic_corpus(other).train[0].image, a.train[0].image);
}

TEST(SyntheticCorpus, PartialLabelsAgreeWithFullLabels) {
  const auto c = generate_synthetic_corpus(small());
  for (const auto& s : c.train) {
    std::size_t labelled = 0;
    for (std::size_t i = 0; i < s.full_labels.pixel_count(); ++i) {
      EXPECT_LT(s.full_labels.data()[i], 6);
      const auto p = s.partial_labels.data()[i];
      if (p == kIgnoreLabel) continue;
      ++labelled;
      EXPECT_EQ(p, s.full_labels.data()[i]);
    }
    EXPECT_GT(labelled, 0u);
    EXPECT_LT(labelled, s.full_labels.pixel_count());
  }
}

TEST(SyntheticCorpus, DefaultCorpusCoversEveryClass) {
  const auto c = generate_synthetic_corpus();
  std::set<int> seen;
  for (const auto& s : c.train)
    for (auto v : s.full_labels.data()) seen.insert(v);
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(c.classes, TerrainClassSet::planetary_default());
}

TEST(RatioExperiment, OneRowPerRatio) {
  const auto c = generate_synthetic_corpus(small());
  RatioExperimentConfig cfg;
  cfg.training.epochs = 20;
  const std::vector<double> ratios{0.0, 0.5, 1.0};
  const auto rows = annotation_ratio_experiment(c, ratios, cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].full_images, 0);
  EXPECT_EQ(rows[1].full_images, 3);
  EXPECT_EQ(rows[2].full_images, 6);
  for (const auto& r : rows) {
    EXPECT_GT(r.pixel_accuracy, 0.0);
    EXPECT_LE(r.pixel_accuracy, 1.0);
    EXPECT_LE(r.mean_iou, 1.0);
  }
  EXPECT_THROW(annotation_ratio_experiment(c, std::vector<double>{1.5}, cfg), std::invalid_argument);
}

}  // namespace
