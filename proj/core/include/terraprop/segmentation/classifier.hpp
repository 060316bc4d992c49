#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "terraprop/raster.hpp"
#include "terraprop/segmentation/classes.hpp"
#include "terraprop/segmentation/features.hpp"
#include "terraprop/segmentation/loss.hpp"

namespace terraprop::segmentation {

/// Multinomial logistic regression over patch texture features.
/// `weights` is a row-major K x (F + 1) matrix whose last column is the bias.
class PixelClassifier {
 public:
  PixelClassifier(TerrainClassSet classes, FeatureConfig feature_config,
                  std::vector<double> weights);

  /// All-zero weights: uniform predictions.
  static PixelClassifier zeros(TerrainClassSet classes, FeatureConfig feature_config);

  [[nodiscard]] int num_classes() const noexcept { return classes_.size(); }
  [[nodiscard]] int num_features() const noexcept { return feature_config_.feature_count(); }
  [[nodiscard]] const TerrainClassSet& classes() const noexcept { return classes_; }
  [[nodiscard]] const FeatureConfig& feature_config() const noexcept { return feature_config_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] double weight(int k, int f) const noexcept {
    return weights_[static_cast<std::size_t>(k) * (num_features() + 1) + f];
  }

  void logits(std::span<const float> features, std::span<double> out) const noexcept;

  friend bool operator==(const PixelClassifier&, const PixelClassifier&) = default;

 private:
  TerrainClassSet classes_;
  FeatureConfig feature_config_;
  std::vector<double> weights_;
};

/// Full-batch gradient descent settings. The step at epoch t is
/// learning_rate * decay_rate^(t / decay_epochs), decayed in whole steps.
struct TrainingHyperparams {
  double learning_rate = 0.5;
  double decay_rate = 0.96;
  int decay_epochs = 25;
  int epochs = 400;
  std::uint64_t seed = 0;
  /// Std of the random initial weights; 0 starts from all zeros.
  double init_scale = 0.0;
};

struct TrainResult {
  PixelClassifier classifier;
  double final_loss = 0.0;
  std::vector<double> loss_history;  // loss before each epoch, then the final loss
  bool single_class = false;         // only one class present among scored pixels
};

/// Fits the classifier on every scored pixel of the given images by
/// minimising the class-weighted cross-entropy. Features are standardised
/// internally and the affine map is folded back into raw-feature weights.
/// Deterministic for a given seed regardless of `threads`.
TrainResult train_classifier(std::span<const FeatureMap> features,
                             std::span<const LabelImage> labels, const ClassWeights& weights,
                             const TerrainClassSet& classes, const FeatureConfig& feature_config,
                             const TrainingHyperparams& hyper, int threads = 1);

TrainResult train_classifier(const FeatureMap& features, const LabelImage& labels,
                             const ClassWeights& weights, const TerrainClassSet& classes,
                             const FeatureConfig& feature_config,
                             const TrainingHyperparams& hyper, int threads = 1);

ProbabilityMap predict_probabilities(const PixelClassifier& classifier,
                                     const FeatureMap& features, int threads = 1);

/// Most probable class per pixel; ties go to the lower index.
LabelImage argmax_labels(const ProbabilityMap& probabilities);

}  // namespace terraprop::segmentation
