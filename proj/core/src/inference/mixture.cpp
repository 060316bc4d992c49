#include "terraprop/inference/mixture.hpp"

#include <atomic>
#include <numbers>
#include <stdexcept>
#include <string>

#include "terraprop/error.hpp"

namespace terraprop::inference {
namespace {

std::atomic<std::uint64_t> g_clamps{0};

template <class T>
void check_probabilities(std::span<const T> p, int num_classes) {
  if (static_cast<int>(p.size()) != num_classes) {
    throw DataError(DataErrc::shape_mismatch, "probability vector has " +
                                                  std::to_string(p.size()) +
                                                  " entries, model has " +
                                                  std::to_string(num_classes) + " classes");
  }
  double sum = 0.0;
  for (T v : p) {
    if (!(v >= 0)) throw DataError(DataErrc::invalid_value, "negative or NaN probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw DataError(DataErrc::invalid_value,
                    "probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
}

template <class T>
MixtureMoments moments_impl(std::span<const T> p, const TerrainPropertyModel& model,
                            Parameter parameter) {
  check_probabilities(p, model.size());
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = p[i];
    const auto& g = model[static_cast<int>(i)][parameter];
    mean += w * g.mu;
    second += w * (g.mu * g.mu + g.sigma * g.sigma);
  }
  double var = second - mean * mean;
  if (var < 0.0) {
    if (var < -1e-12 * std::max(1.0, second)) {
      throw std::logic_error("mixture variance " + std::to_string(var) +
                             " is negative beyond roundoff");
    }
    g_clamps.fetch_add(1, std::memory_order_relaxed);
    var = 0.0;
  }
  return {mean, std::sqrt(var)};
}

}  // namespace

MixtureMoments mixture_moments(std::span<const double> p, const TerrainPropertyModel& model,
                               Parameter parameter) {
  return moments_impl(p, model, parameter);
}

MixtureMoments mixture_moments(std::span<const float> p, const TerrainPropertyModel& model,
                               Parameter parameter) {
  return moments_impl(p, model, parameter);
}

double mixture_pdf(std::span<const double> p, const TerrainPropertyModel& model,
                   Parameter parameter, double x) {
  check_probabilities(p, model.size());
  double density = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    const auto& g = model[static_cast<int>(i)][parameter];
    if (!(g.sigma > 0.0)) {
      throw DataError(DataErrc::invalid_value,
                      "degenerate component: class '" + model.classes().name(static_cast<int>(i)) +
                          "' has sigma 0 for " + std::string(terramech::parameter_id(parameter)) +
                          "; a point mass has no density, use mixture_moments instead");
    }
    const double z = (x - g.mu) / g.sigma;
    density += p[i] * std::exp(-0.5 * z * z) / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  return density;
}

std::uint64_t negative_variance_clamps() noexcept {
  return g_clamps.load(std::memory_order_relaxed);
}

}  // namespace terraprop::inference
