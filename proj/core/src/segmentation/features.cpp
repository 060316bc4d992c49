#include "terraprop/segmentation/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "terraprop/error.hpp"
#include "terraprop/parallel.hpp"

namespace terraprop::segmentation {
namespace {

// Summed-area table with a zero first row/column: table(r+1, c+1) holds the
// sum over [0..r] x [0..c].
template <class T>
class IntegralImage {
 public:
  IntegralImage(int height, int width) : width_(width + 1), sums_((height + 1) * (width + 1)) {}

  T& at(int row, int col) { return sums_[static_cast<std::size_t>(row) * width_ + col]; }
  [[nodiscard]] T at(int row, int col) const {
    return sums_[static_cast<std::size_t>(row) * width_ + col];
  }

  // Inclusive box [r0, r1] x [c0, c1].
  [[nodiscard]] T box(int r0, int c0, int r1, int c1) const {
    return at(r1 + 1, c1 + 1) - at(r0, c1 + 1) - at(r1 + 1, c0) + at(r0, c0);
  }

 private:
  int width_;
  std::vector<T> sums_;
};

}  // namespace

FeatureMap extract_features(const RgbImage& image, const FeatureConfig& config, int threads) {
  if (image.empty()) throw DataError(DataErrc::invalid_value, "cannot extract features: empty image");
  if (image.channels() != 3) throw DataError(DataErrc::shape_mismatch, "expected an RGB image");
  if (config.patch_radius < 1) throw std::invalid_argument("patch_radius must be >= 1");

  const int height = image.height();
  const int width = image.width();
  const int radius = config.patch_radius;

  // Integer tables keep mean/variance exact for 8-bit input.
  std::vector<IntegralImage<std::int64_t>> sum(3, IntegralImage<std::int64_t>(height, width));
  std::vector<IntegralImage<std::int64_t>> sum_sq(3, IntegralImage<std::int64_t>(height, width));
  std::vector<IntegralImage<double>> grad(3, IntegralImage<double>(height, width));

  for (int ch = 0; ch < 3; ++ch) {
    for (int r = 0; r < height; ++r) {
      std::int64_t row_sum = 0;
      std::int64_t row_sq = 0;
      double row_grad = 0.0;
      const int up = std::max(r - 1, 0);
      const int down = std::min(r + 1, height - 1);
      for (int c = 0; c < width; ++c) {
        const std::int64_t v = image(r, c, ch);
        const int left = std::max(c - 1, 0);
        const int right = std::min(c + 1, width - 1);
        const double gx = 0.5 * (static_cast<double>(image(r, right, ch)) - image(r, left, ch));
        const double gy = 0.5 * (static_cast<double>(image(down, c, ch)) - image(up, c, ch));
        row_sum += v;
        row_sq += v * v;
        row_grad += std::hypot(gx, gy);
        sum[ch].at(r + 1, c + 1) = sum[ch].at(r, c + 1) + row_sum;
        sum_sq[ch].at(r + 1, c + 1) = sum_sq[ch].at(r, c + 1) + row_sq;
        grad[ch].at(r + 1, c + 1) = grad[ch].at(r, c + 1) + row_grad;
      }
    }
  }

  FeatureMap out(height, width, config.feature_count());
  parallel_for(static_cast<std::size_t>(height), threads, [&](std::size_t begin, std::size_t end) {
    for (int r = static_cast<int>(begin); r < static_cast<int>(end); ++r) {
      const int r0 = std::max(r - radius, 0);
      const int r1 = std::min(r + radius, height - 1);
      for (int c = 0; c < width; ++c) {
        const int c0 = std::max(c - radius, 0);
        const int c1 = std::min(c + radius, width - 1);
        const std::int64_t n = static_cast<std::int64_t>(r1 - r0 + 1) * (c1 - c0 + 1);
        auto f = out.pixel(r, c);
        for (int ch = 0; ch < 3; ++ch) {
          const std::int64_t s = sum[ch].box(r0, c0, r1, c1);
          const std::int64_t s2 = sum_sq[ch].box(r0, c0, r1, c1);
          const double mean = static_cast<double>(s) / static_cast<double>(n);
          // n * s2 - s^2 is exact in 64-bit and non-negative by Cauchy-Schwarz.
          const double var = static_cast<double>(n * s2 - s * s) / static_cast<double>(n * n);
          const double g = grad[ch].box(r0, c0, r1, c1) / static_cast<double>(n);
          f[ch] = static_cast<float>(mean / kMeanScale);
          f[3 + ch] = static_cast<float>(std::sqrt(var) / kStdScale);
          f[6 + ch] = static_cast<float>(std::max(g, 0.0) / kGradientScale);
        }
      }
    }
  });
  return out;
}

}  // namespace terraprop::segmentation
