#include "terraprop/inference/hazard.hpp"

#include <cmath>
#include <stdexcept>

namespace terraprop::inference {

HazardResult hazard_flags(const PropertyMaps& maps, const HazardThresholds& t) {
  for (double v : {t.n_max, t.phi_min_deg, t.sigma_n_max, t.sigma_phi_max}) {
    if (std::isnan(v)) throw std::invalid_argument("hazard thresholds must not be NaN");
  }
  const auto& n = maps.sinkage_exponent;
  const auto& phi = maps.friction_angle;
  HazardResult out{Raster<std::uint8_t>(n.mean.height(), n.mean.width(), 1, 0), {}};
  out.summary.pixels = n.mean.pixel_count();
  for (std::size_t p = 0; p < n.mean.pixel_count(); ++p) {
    std::uint8_t f = 0;
    if (n.mean.data()[p] > t.n_max) f |= kSoft;
    if (phi.mean.data()[p] < t.phi_min_deg) f |= kSlippery;
    if (n.std.data()[p] > t.sigma_n_max || phi.std.data()[p] > t.sigma_phi_max) f |= kUncertain;
    out.flags.data()[p] = f;
    if (f & kSoft) ++out.summary.soft;
    if (f & kSlippery) ++out.summary.slippery;
    if (f & kUncertain) ++out.summary.uncertain;
    if (f) ++out.summary.any;
  }
  return out;
}

}  // namespace terraprop::inference
