#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "terraprop/terramech/property_model.hpp"

namespace terraprop::inference {

using terramech::Parameter;
using terramech::TerrainPropertyModel;

/// Tolerance on sum(p) = 1 accepted for a probability vector.
inline constexpr double kProbabilitySumTolerance = 1e-5;

struct MixtureMoments {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Moments of the Gaussian mixture sum_i p_i N(mu_i, sigma_i^2):
///   mu      = sum p_i mu_i
///   sigma^2 = sum p_i (mu_i^2 + sigma_i^2) - mu^2
/// Zero-sigma components are fine here. Roundoff that drives sigma^2 slightly
/// negative is clamped to 0 (and counted); anything below -1e-12 relative to
/// the second moment is treated as a bug and throws std::logic_error.
MixtureMoments mixture_moments(std::span<const double> p, const TerrainPropertyModel& model,
                               Parameter parameter);
MixtureMoments mixture_moments(std::span<const float> p, const TerrainPropertyModel& model,
                               Parameter parameter);

/// Density of the mixture at x. Throws DataError if a component with p_i > 0
/// has sigma_i = 0 (a point mass has no density; use mixture_moments).
double mixture_pdf(std::span<const double> p, const TerrainPropertyModel& model,
                   Parameter parameter, double x);

/// Number of negative-variance clamps since start-up (debug aid).
std::uint64_t negative_variance_clamps() noexcept;

}  // namespace terraprop::inference
