#pragma once

#include <span>
#include <vector>

#include "terraprop/raster.hpp"

namespace terraprop::segmentation {

/// Per-class loss weights; positive and summing to one.
class ClassWeights {
 public:
  explicit ClassWeights(std::vector<double> beta);

  /// 1/K for every class.
  static ClassWeights uniform(int num_classes);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(beta_.size()); }
  [[nodiscard]] double operator[](int k) const noexcept { return beta_[k]; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return beta_; }

 private:
  std::vector<double> beta_;
};

inline constexpr double kDefaultWeightConstant = 1.1;

/// Inverse-log frequency weights: beta_k proportional to 1 / ln(p_k + c).
/// Rarer classes receive larger weights when c > 1.
ClassWeights compute_class_weights(std::span<const double> proportions,
                                   double c = kDefaultWeightConstant);

/// Fraction of scored (non-ignore) pixels belonging to each class, pooled over
/// all images. Throws DataError if nothing is scored or a label is >= K.
std::vector<double> label_proportions(std::span<const LabelImage> labels, int num_classes);

/// Numerically stable softmax of one pixel's logits (max subtracted first).
void softmax(std::span<const double> logits, std::span<double> out);
std::vector<double> softmax(std::span<const double> logits);

/// Pixelwise softmax of an H x W x K logit tensor.
ProbabilityMap softmax_probabilities(const Raster<double>& logits);

/// Probabilities are clamped to this floor before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// Class-weighted softmax cross-entropy averaged over scored pixels. Pixels
/// labelled kIgnoreLabel contribute nothing.
double weighted_cross_entropy(const Raster<double>& logits, const LabelImage& labels,
                              const ClassWeights& weights);

/// Analytic gradient of weighted_cross_entropy with respect to the logits.
Raster<double> wce_gradient(const Raster<double>& logits, const LabelImage& labels,
                            const ClassWeights& weights);

}  // namespace terraprop::segmentation
