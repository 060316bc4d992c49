#pragma once

#include "terraprop/raster.hpp"

namespace terraprop::segmentation {

/// H x W x F texture features, each scaled into [0, 1].
using FeatureMap = Raster<float>;

/// Patch texture descriptor settings.
///
/// For every pixel the square window of half-size `patch_radius`, clipped to
/// the image bounds, yields per RGB channel:
///   - mean intensity            / 255
///   - population std deviation  / 127.5            (max std of 8-bit data)
///   - mean gradient magnitude   / (127.5 * sqrt 2) (max central difference)
/// giving F = 9 features ordered [mean r,g,b | std r,g,b | grad r,g,b].
/// Gradients are central differences with replicated borders.
struct FeatureConfig {
  int patch_radius = 4;

  [[nodiscard]] int feature_count() const noexcept { return 9; }
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

inline constexpr double kMeanScale = 255.0;
inline constexpr double kStdScale = 127.5;
inline constexpr double kGradientScale = 127.5 * 1.4142135623730951;

FeatureMap extract_features(const RgbImage& image, const FeatureConfig& config = {},
                            int threads = 1);

}  // namespace terraprop::segmentation
