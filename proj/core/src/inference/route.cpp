#include "terraprop/inference/route.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "terraprop/error.hpp"

namespace terraprop::inference {
namespace {

struct Bilinear {
  int r0, c0, r1, c1;
  double fr, fc;

  [[nodiscard]] double operator()(const Raster<float>& img, bool squared) const {
    auto v = [&](int r, int c) {
      const double x = img(r, c);
      return squared ? x * x : x;
    };
    return (1 - fr) * ((1 - fc) * v(r0, c0) + fc * v(r0, c1)) +
           fr * ((1 - fc) * v(r1, c0) + fc * v(r1, c1));
  }
};

Bilinear locate(const RoutePoint& pt, int height, int width) {
  if (!(pt.row >= 0.0 && pt.col >= 0.0 && pt.row <= height - 1 && pt.col <= width - 1)) {
    throw DataError(DataErrc::invalid_value,
                    "route point (" + std::to_string(pt.row) + ", " + std::to_string(pt.col) +
                        ") outside the " + std::to_string(height) + "x" +
                        std::to_string(width) + " raster");
  }
  const int r0 = static_cast<int>(std::floor(pt.row));
  const int c0 = static_cast<int>(std::floor(pt.col));
  return {r0, c0, std::min(r0 + 1, height - 1), std::min(c0 + 1, width - 1), pt.row - r0,
          pt.col - c0};
}

void check_series(std::size_t a, std::size_t b) {
  if (a == 0) throw std::invalid_argument("empty series");
  if (a != b) throw std::invalid_argument("series lengths differ");
}

}  // namespace

RoutePrediction predict_route(const PropertyMaps& maps, const Route& route) {
  const int h = maps.sinkage_exponent.mean.height();
  const int w = maps.sinkage_exponent.mean.width();
  RoutePrediction out;
  for (const auto& track : route.wheels) {
    WheelPrediction wp{track.wheel, {}};
    wp.points.reserve(track.points.size());
    for (const auto& pt : track.points) {
      const auto at = locate(pt, h, w);
      RoutePointPrediction pred;
      pred.point = pt;
      pred.mu_n = at(maps.sinkage_exponent.mean, false);
      pred.sigma_n = std::sqrt(std::max(at(maps.sinkage_exponent.std, true), 0.0));
      pred.mu_phi = at(maps.friction_angle.mean, false);
      pred.sigma_phi = std::sqrt(std::max(at(maps.friction_angle.std, true), 0.0));
      wp.points.push_back(pred);
    }
    out.wheels.push_back(std::move(wp));
  }
  return out;
}

double default_full_scale(Parameter p) noexcept {
  return p == Parameter::sinkage_exponent ? kFullScaleN : kFullScalePhiDeg;
}

double full_scale_error(std::span<const double> predicted, std::span<const double> truth,
                        double fs_range) {
  check_series(predicted.size(), truth.size());
  if (!(fs_range > 0.0)) throw std::invalid_argument("full-scale range must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - truth[i]);
  return sum / static_cast<double>(predicted.size()) / fs_range * 100.0;
}

double interval_coverage(std::span<const double> means, std::span<const double> stds,
                         std::span<const double> truth, double multiplier) {
  check_series(means.size(), truth.size());
  check_series(stds.size(), truth.size());
  if (!(multiplier > 0.0)) throw std::invalid_argument("interval multiplier must be positive");
  std::size_t inside = 0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (std::abs(truth[i] - means[i]) <= multiplier * stds[i]) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(means.size());
}

}  // namespace terraprop::inference
