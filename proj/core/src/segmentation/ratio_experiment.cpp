#include "terraprop/segmentation/ratio_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "terraprop/error.hpp"

namespace terraprop::segmentation {

std::vector<RatioResult> annotation_ratio_experiment(const SyntheticCorpus& corpus,
                                                     std::span<const double> ratios,
                                                     const RatioExperimentConfig& config) {
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("annotation ratio outside [0, 1]");
  }
  if (corpus.train.empty() || corpus.test.empty()) {
    throw DataError(DataErrc::invalid_value, "corpus needs both train and test samples");
  }
  const int num_classes = corpus.classes.size();

  std::vector<FeatureMap> train_features;
  for (const auto& s : corpus.train) {
    train_features.push_back(extract_features(s.image, config.features, config.threads));
  }
  std::vector<FeatureMap> test_features;
  for (const auto& s : corpus.test) {
    test_features.push_back(extract_features(s.image, config.features, config.threads));
  }

  std::vector<std::size_t> order(corpus.train.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  // Fisher-Yates with raw engine output keeps the permutation portable.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }

  std::vector<RatioResult> rows;
  for (double ratio : ratios) {
    const auto full = static_cast<std::size_t>(std::lround(ratio * order.size()));
    std::vector<LabelImage> labels(corpus.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& sample = corpus.train[order[i]];
      labels[order[i]] = i < full ? sample.full_labels : sample.partial_labels;
    }
    const auto proportions = label_proportions(labels, num_classes);
    // Classes missing from the selection still get a (large) finite weight.
    const auto beta = compute_class_weights(proportions, config.weight_constant);
    const auto trained = train_classifier(train_features, labels, beta, corpus.classes,
                                          config.features, config.training, config.threads);

    ConfusionMatrix cm(num_classes);
    for (std::size_t i = 0; i < corpus.test.size(); ++i) {
      const auto probs = predict_probabilities(trained.classifier, test_features[i], config.threads);
      cm += confusion(argmax_labels(probs), corpus.test[i].full_labels, num_classes);
    }
    const auto m = metrics(cm, config.miou_mode);
    rows.push_back({ratio, static_cast<int>(full), m.pixel_accuracy, m.mean_iou});
  }
  return rows;
}

}  // namespace terraprop::segmentation
