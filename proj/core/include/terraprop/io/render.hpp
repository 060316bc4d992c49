#pragma once

#include <array>
#include <cstdint>

#include "terraprop/raster.hpp"
#include "terraprop/segmentation/classes.hpp"

namespace terraprop::io {

/// The 256-entry viridis table (matplotlib's sampling at i/255, rounded to 8 bits).
const std::array<std::array<std::uint8_t, 3>, 256>& viridis_lut() noexcept;

/// Maps channel `channel` of `raster` linearly onto the LUT: `lo` lands on
/// entry 0 and `hi` on entry 255, out-of-range values clamp to the ends and
/// NaN pixels render black. Throws std::invalid_argument on an empty raster
/// or when lo >= hi.
RgbImage render_heatmap(const Raster<float>& raster, double lo, double hi, int channel = 0);

/// Class colours per pixel; ignored or out-of-range labels render black.
RgbImage render_labels(const LabelImage& labels, const segmentation::TerrainClassSet& classes);

/// Blends class colours over an image with weight alpha/255. Ignored pixels
/// keep the image colour.
RgbImage render_overlay(const RgbImage& image, const LabelImage& labels,
                        const segmentation::TerrainClassSet& classes, int alpha = 128);

}  // namespace terraprop::io
