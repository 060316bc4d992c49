#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace terraprop::segmentation {

using Rgb = std::array<std::uint8_t, 3>;

/// Ordered set of terrain classes. The position of a name is its class index
/// in label rasters, probability channels and property models.
class TerrainClassSet {
 public:
  TerrainClassSet(std::vector<std::string> names, std::vector<Rgb> colors);

  /// soil, stony soil, gravel, bedrock, rock, background.
  static TerrainClassSet planetary_default();

  [[nodiscard]] int size() const noexcept { return static_cast<int>(names_.size()); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const std::vector<Rgb>& colors() const noexcept { return colors_; }
  [[nodiscard]] const std::string& name(int k) const { return names_.at(k); }
  [[nodiscard]] const Rgb& color(int k) const { return colors_.at(k); }
  [[nodiscard]] std::optional<int> find(std::string_view name) const noexcept;

  friend bool operator==(const TerrainClassSet&, const TerrainClassSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Rgb> colors_;
};

}  // namespace terraprop::segmentation
