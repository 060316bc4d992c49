#pragma once

#include "terraprop/inference/mixture.hpp"
#include "terraprop/raster.hpp"

namespace terraprop::inference {

/// Dense mean and standard deviation rasters of one terrain parameter.
struct PropertyMap {
  Parameter parameter = Parameter::sinkage_exponent;
  Raster<float> mean;
  Raster<float> std;
};

struct PropertyMaps {
  PropertyMap sinkage_exponent;
  PropertyMap friction_angle;

  [[nodiscard]] const PropertyMap& operator[](Parameter p) const noexcept {
    return p == Parameter::sinkage_exponent ? sinkage_exponent : friction_angle;
  }
};

/// Pixelwise mixture_moments for N and phi. Rows are split across `threads`;
/// each pixel is computed independently so the output does not depend on it.
PropertyMaps infer_property_maps(const ProbabilityMap& probabilities,
                                 const TerrainPropertyModel& model, int threads = 1);

}  // namespace terraprop::inference
