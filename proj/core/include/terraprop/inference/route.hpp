#pragma once

#include <optional>
#include <span>
#include <vector>

#include "terraprop/inference/property_map.hpp"

namespace terraprop::inference {

struct RoutePoint {
  double row = 0.0;  // pixel coordinates; fractional values are interpolated
  double col = 0.0;
  std::optional<double> arclength;  // m
};

struct WheelTrack {
  int wheel = 0;
  std::vector<RoutePoint> points;
};

/// One pixel track per wheel.
struct Route {
  std::vector<WheelTrack> wheels;
};

struct RoutePointPrediction {
  RoutePoint point;
  double mu_n = 0.0;
  double sigma_n = 0.0;
  double mu_phi = 0.0;
  double sigma_phi = 0.0;
  std::optional<double> truth_n;    // in-situ identification, when aligned
  std::optional<double> truth_phi;
};

struct WheelPrediction {
  int wheel = 0;
  std::vector<RoutePointPrediction> points;
};

struct RoutePrediction {
  std::vector<WheelPrediction> wheels;
};

/// Samples the maps along every wheel track. Means and variances are
/// bilinearly interpolated; sigma is the square root of the interpolated
/// variance. Throws DataError for points outside [0, H-1] x [0, W-1].
RoutePrediction predict_route(const PropertyMaps& maps, const Route& route);

/// Default full-scale ranges: N in [0, 2], phi in [0, 60] deg.
inline constexpr double kFullScaleN = 2.0;
inline constexpr double kFullScalePhiDeg = 60.0;
double default_full_scale(Parameter p) noexcept;

/// mean(|pred - truth|) / fs_range * 100.
double full_scale_error(std::span<const double> predicted, std::span<const double> truth,
                        double fs_range);

/// Fraction of points with |truth - mean| <= multiplier * std.
double interval_coverage(std::span<const double> means, std::span<const double> stds,
                         std::span<const double> truth, double multiplier = 1.0);

}  // namespace terraprop::inference
