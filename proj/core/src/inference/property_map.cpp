#include "terraprop/inference/property_map.hpp"

#include <string>

#include "terraprop/error.hpp"
#include "terraprop/parallel.hpp"

namespace terraprop::inference {

PropertyMaps infer_property_maps(const ProbabilityMap& probabilities,
                                 const TerrainPropertyModel& model, int threads) {
  if (probabilities.channels() != model.size()) {
    throw DataError(DataErrc::shape_mismatch,
                    "probability map has " + std::to_string(probabilities.channels()) +
                        " classes, property model has " + std::to_string(model.size()));
  }
  const int h = probabilities.height();
  const int w = probabilities.width();
  PropertyMaps out{{Parameter::sinkage_exponent, Raster<float>(h, w, 1), Raster<float>(h, w, 1)},
                   {Parameter::friction_angle, Raster<float>(h, w, 1), Raster<float>(h, w, 1)}};

  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t p = r0 * w; p < r1 * w; ++p) {
      const auto px = probabilities.pixel(p);
      const auto n = mixture_moments(px, model, Parameter::sinkage_exponent);
      const auto phi = mixture_moments(px, model, Parameter::friction_angle);
      out.sinkage_exponent.mean.data()[p] = static_cast<float>(n.mu);
      out.sinkage_exponent.std.data()[p] = static_cast<float>(n.sigma);
      out.friction_angle.mean.data()[p] = static_cast<float>(phi.mu);
      out.friction_angle.std.data()[p] = static_cast<float>(phi.sigma);
    }
  });
  return out;
}

}  // namespace terraprop::inference
