#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "terraprop/segmentation/classifier.hpp"
#include "terraprop/segmentation/metrics.hpp"
#include "terraprop/segmentation/synthetic.hpp"

namespace terraprop::segmentation {

struct RatioExperimentConfig {
  FeatureConfig features;
  TrainingHyperparams training;
  double weight_constant = kDefaultWeightConstant;
  MiouMode miou_mode = MiouMode::present_classes;
  std::uint64_t seed = 0;  // selects which training images get full labels
  int threads = 1;
};

struct RatioResult {
  double ratio = 0.0;
  int full_images = 0;
  double pixel_accuracy = 0.0;
  double mean_iou = 0.0;
};

/// For each ratio, the first round(ratio * n) images of a seeded permutation
/// of the training split use full labels and the rest their partial labels.
/// The sets are nested across ratios. Each run is scored on the fully
/// labelled test split.
std::vector<RatioResult> annotation_ratio_experiment(const SyntheticCorpus& corpus,
                                                     std::span<const double> ratios,
                                                     const RatioExperimentConfig& config);

}  // namespace terraprop::segmentation
