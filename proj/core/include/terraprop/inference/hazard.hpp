#pragma once

#include <cstdint>
#include <limits>

#include "terraprop/inference/property_map.hpp"

namespace terraprop::inference {

/// Independent flag bits in the hazard raster.
enum HazardFlag : std::uint8_t {
  kSoft = 1,       // mean N above n_max
  kSlippery = 2,   // mean phi below phi_min
  kUncertain = 4,  // any std above its limit
};

struct HazardThresholds {
  double n_max = std::numeric_limits<double>::infinity();
  double phi_min_deg = -std::numeric_limits<double>::infinity();
  double sigma_n_max = std::numeric_limits<double>::infinity();
  double sigma_phi_max = std::numeric_limits<double>::infinity();
};

struct HazardSummary {
  std::size_t pixels = 0;
  std::size_t soft = 0;
  std::size_t slippery = 0;
  std::size_t uncertain = 0;
  std::size_t any = 0;
};

struct HazardResult {
  Raster<std::uint8_t> flags;
  HazardSummary summary;
};

HazardResult hazard_flags(const PropertyMaps& maps, const HazardThresholds& thresholds);

}  // namespace terraprop::inference
