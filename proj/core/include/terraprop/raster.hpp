#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace terraprop {

/// Dense row-major H x W x C array. The storage order matches the on-disk
/// tensor layout, so codecs copy the buffer verbatim.
template <class T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int height, int width, int channels, T fill = T{})
      : height_(height), width_(width), channels_(channels) {
    if (height < 0 || width < 0 || channels < 1) {
      throw std::invalid_argument("raster dimensions must be non-negative with >= 1 channel");
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
  }

  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] std::size_t index(int row, int col, int ch = 0) const noexcept {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  T& operator()(int row, int col, int ch = 0) noexcept { return data_[index(row, col, ch)]; }
  const T& operator()(int row, int col, int ch = 0) const noexcept {
    return data_[index(row, col, ch)];
  }

  [[nodiscard]] std::span<T> pixel(int row, int col) noexcept {
    return {data_.data() + index(row, col), static_cast<std::size_t>(channels_)};
  }
  [[nodiscard]] std::span<const T> pixel(int row, int col) const noexcept {
    return {data_.data() + index(row, col), static_cast<std::size_t>(channels_)};
  }
  [[nodiscard]] std::span<T> pixel(std::size_t flat) noexcept {
    return {data_.data() + flat * channels_, static_cast<std::size_t>(channels_)};
  }
  [[nodiscard]] std::span<const T> pixel(std::size_t flat) const noexcept {
    return {data_.data() + flat * channels_, static_cast<std::size_t>(channels_)};
  }

  [[nodiscard]] bool in_bounds(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }
  [[nodiscard]] bool same_shape(int height, int width) const noexcept {
    return height == height_ && width == width_;
  }
  template <class U>
  [[nodiscard]] bool same_shape(const Raster<U>& other) const noexcept {
    return other.height() == height_ && other.width() == width_;
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 1;
  std::vector<T> data_;
};

/// 8-bit RGB image (3 channels).
using RgbImage = Raster<std::uint8_t>;

/// Per-pixel class index; kIgnoreLabel marks pixels excluded from loss and metrics.
using LabelImage = Raster<std::uint8_t>;
inline constexpr std::uint8_t kIgnoreLabel = 255;

/// H x W x K per-pixel terrain-class probabilities.
using ProbabilityMap = Raster<float>;

}  // namespace terraprop
