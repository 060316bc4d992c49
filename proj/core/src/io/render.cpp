#include "terraprop/io/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace terraprop::io {

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 256> kViridis{{
#include "viridis_lut.inc"
}};

}  // namespace

const std::array<std::array<std::uint8_t, 3>, 256>& viridis_lut() noexcept { return kViridis; }

RgbImage render_heatmap(const Raster<float>& raster, double lo, double hi, int channel) {
  if (raster.empty()) throw std::invalid_argument("render_heatmap: empty raster");
  if (!(lo < hi)) throw std::invalid_argument("render_heatmap: range minimum must be below maximum");
  if (channel < 0 || channel >= raster.channels()) {
    throw std::invalid_argument("render_heatmap: channel out of range");
  }
  RgbImage out(raster.height(), raster.width(), 3);
  const double scale = 255.0 / (hi - lo);
  for (int r = 0; r < raster.height(); ++r) {
    for (int c = 0; c < raster.width(); ++c) {
      const double v = raster(r, c, channel);
      auto px = out.pixel(r, c);
      if (std::isnan(v)) {
        px[0] = px[1] = px[2] = 0;
        continue;
      }
      // Round-half-up on the scaled value; the clamp happens before the cast
      // so infinities are safe.
      double t = std::floor((v - lo) * scale + 0.5);
      t = std::clamp(t, 0.0, 255.0);
      const auto& rgb = kViridis[static_cast<std::size_t>(t)];
      px[0] = rgb[0];
      px[1] = rgb[1];
      px[2] = rgb[2];
    }
  }
  return out;
}

RgbImage render_labels(const LabelImage& labels, const segmentation::TerrainClassSet& classes) {
  RgbImage out(labels.height(), labels.width(), 3, 0);
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
    const int k = labels.data()[i * labels.channels()];
    if (k >= classes.size()) continue;
    const auto& rgb = classes.color(k);
    auto px = out.pixel(i);
    px[0] = rgb[0];
    px[1] = rgb[1];
    px[2] = rgb[2];
  }
  return out;
}

RgbImage render_overlay(const RgbImage& image, const LabelImage& labels,
                        const segmentation::TerrainClassSet& classes, int alpha) {
  if (image.height() != labels.height() || image.width() != labels.width()) {
    throw std::invalid_argument("render_overlay: image and labels differ in size");
  }
  if (alpha < 0 || alpha > 255) throw std::invalid_argument("render_overlay: alpha outside [0, 255]");
  RgbImage out = image;
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
    const int k = labels.data()[i * labels.channels()];
    if (k >= classes.size()) continue;
    const auto& rgb = classes.color(k);
    auto px = out.pixel(i);
    for (int ch = 0; ch < 3; ++ch) {
      px[ch] = static_cast<std::uint8_t>((px[ch] * (255 - alpha) + rgb[ch] * alpha + 127) / 255);
    }
  }
  return out;
}

}  // namespace terraprop::io
