#include "terraprop/segmentation/classes.hpp"

#include <algorithm>
#include <stdexcept>

namespace terraprop::segmentation {

TerrainClassSet::TerrainClassSet(std::vector<std::string> names, std::vector<Rgb> colors)
    : names_(std::move(names)), colors_(std::move(colors)) {
  if (names_.size() < 2) throw std::invalid_argument("class set needs at least 2 classes");
  if (names_.size() > 255) throw std::invalid_argument("class set limited to 255 classes");
  if (colors_.size() != names_.size()) {
    throw std::invalid_argument("class set needs exactly one color per class");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw std::invalid_argument("class names must be non-empty");
    if (std::find(names_.begin() + static_cast<std::ptrdiff_t>(i) + 1, names_.end(), names_[i]) !=
        names_.end()) {
      throw std::invalid_argument("duplicate class name '" + names_[i] + "'");
    }
  }
}

TerrainClassSet TerrainClassSet::planetary_default() {
  return TerrainClassSet({"soil", "stony soil", "gravel", "bedrock", "rock", "background"},
                         {Rgb{194, 150, 92}, Rgb{150, 110, 70}, Rgb{128, 128, 128},
                          Rgb{170, 80, 50}, Rgb{60, 40, 30}, Rgb{40, 90, 160}});
}

std::optional<int> TerrainClassSet::find(std::string_view name) const noexcept {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

}  // namespace terraprop::segmentation
