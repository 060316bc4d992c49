#include "terraprop/terramech/wheel_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "terraprop/error.hpp"

namespace terraprop::terramech {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_arc(double theta, double theta1) {
  if (!(theta1 >= 0.0 && theta1 < std::numbers::pi / 2)) {
    throw std::invalid_argument("entry angle must lie in [0, pi/2)");
  }
  if (!(std::abs(theta) <= theta1)) {
    throw std::invalid_argument("angle " + std::to_string(theta) +
                                " outside the contact arc [-theta1, theta1]");
  }
}

double tan_friction(double friction_angle_deg) {
  if (!(friction_angle_deg >= 0.0 && friction_angle_deg < 90.0)) {
    throw std::invalid_argument("friction angle must lie in [0, 90) degrees");
  }
  return std::tan(friction_angle_deg * kDegToRad);
}

}  // namespace

void WheelGeometry::validate() const {
  if (!(radius > 0 && width > 0 && lug_height > 0 && slip_radius > 0)) {
    throw std::invalid_argument("wheel dimensions must be positive");
  }
  if (!(radius <= slip_radius && slip_radius <= radius + lug_height)) {
    throw std::invalid_argument("slip radius must lie in [r, r + h]");
  }
}

void SoilParams::validate() const {
  if (!(k_c > 0 && k_phi > 0 && cohesion > 0 && shear_modulus > 0)) {
    throw std::invalid_argument("soil constants must be positive");
  }
}

SlipRatio slip_ratio(double omega, double v, double slip_radius, double epsilon) {
  const double rim = slip_radius * omega;
  if (!(rim > epsilon)) {
    throw DataError(DataErrc::invalid_value,
                    "slip undefined: rim speed " + std::to_string(rim) + " m/s <= " +
                        std::to_string(epsilon));
  }
  const double raw = (rim - v) / rim;
  if (raw < 0.0) return {0.0, true};
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

double entry_angle(double sinkage, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("wheel radius must be positive");
  if (!(sinkage >= 0.0)) {
    throw DataError(DataErrc::invalid_value, "sinkage must be non-negative");
  }
  if (!(sinkage < radius)) {
    throw DataError(DataErrc::invalid_value, "wheel buried: sinkage >= radius");
  }
  return std::acos(1.0 - sinkage / radius);
}

double normal_stress(double theta, double sinkage_exponent, double theta1,
                     const WheelGeometry& wheel, const SoilParams& soil) {
  check_arc(theta, theta1);
  if (!(sinkage_exponent > 0.0)) throw std::invalid_argument("sinkage exponent must be > 0");
  const double depth = wheel.radius * (std::cos(theta) - std::cos(theta1));
  if (depth <= 0.0) return 0.0;
  return (soil.k_c / wheel.width + soil.k_phi) * std::pow(depth, sinkage_exponent);
}

double shear_displacement(double theta, double slip, double theta1, double radius) {
  check_arc(theta, theta1);
  if (!(slip >= 0.0 && slip <= 1.0)) throw std::invalid_argument("slip must lie in [0, 1]");
  const double j =
      radius * ((theta1 - theta) - (1.0 - slip) * (std::sin(theta1) - std::sin(theta)));
  return j > 0.0 ? j : 0.0;  // roundoff near theta1
}

double shear_stress(double theta, double sinkage_exponent, double friction_angle_deg,
                    double slip, double theta1, const WheelGeometry& wheel,
                    const SoilParams& soil) {
  const double tan_phi = tan_friction(friction_angle_deg);
  const double sigma = normal_stress(theta, sinkage_exponent, theta1, wheel, soil);
  const double j = shear_displacement(theta, slip, theta1, wheel.radius);
  return (soil.cohesion + sigma * tan_phi) * (1.0 - std::exp(-j / soil.shear_modulus));
}

ContactArc::ContactArc(double slip, double theta1, double exit_angle,
                       const WheelGeometry& wheel, const SoilParams& soil, int intervals)
    : slip_(slip),
      theta1_(theta1),
      radius_(wheel.radius),
      width_(wheel.width),
      stiffness_(soil.k_c / wheel.width + soil.k_phi),
      cohesion_(soil.cohesion) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("quadrature intervals must be even and >= 2");
  }
  if (!(theta1 >= 0.0 && theta1 < std::numbers::pi / 2)) {
    throw std::invalid_argument("entry angle must lie in [0, pi/2)");
  }
  if (!(exit_angle >= 0.0 && exit_angle <= theta1)) {
    throw std::invalid_argument("exit angle must lie in [0, theta1]");
  }
  if (!(slip >= 0.0 && slip <= 1.0)) throw std::invalid_argument("slip must lie in [0, 1]");

  // Near the entry point sigma behaves like (theta1 - theta)^N, which plain
  // Simpson resolves poorly for small N. Integrating in t with
  // theta = theta1 - span * t^3 turns that into t^(3N + 2).
  const double span = theta1 + exit_angle;
  const double h = 1.0 / intervals;
  const double cos1 = std::cos(theta1);
  const double sin1 = std::sin(theta1);
  nodes_.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double t = i * h;
    // First node sits exactly on theta1 so the stress there is exactly 0.
    const double theta = i == 0 ? theta1 : theta1 - span * t * t * t;
    const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double depth = wheel.radius * (std::cos(theta) - cos1);
    double j = wheel.radius * ((theta1 - theta) - (1.0 - slip) * (sin1 - std::sin(theta)));
    if (j < 0.0) j = 0.0;
    const double g = 1.0 - std::exp(-j / soil.shear_modulus);
    const double weight = simpson * h / 3.0 * 3.0 * span * t * t;
    nodes_.push_back({weight, std::cos(theta),
                      depth > 0.0 ? std::log(depth) : -std::numeric_limits<double>::infinity(), g,
                      g * std::sin(theta)});
    sum_g_ += weight * g;
    sum_g_sin_ += weight * g * std::sin(theta);
  }
}

ArcIntegrals ContactArc::integrals(double sinkage_exponent) const {
  ArcIntegrals out;
  out.radius = radius_;
  out.width = width_;
  out.cohesion = cohesion_;
  out.g = sum_g_;
  out.g_sin = sum_g_sin_;
  for (const auto& n : nodes_) {
    const double sigma = stiffness_ * std::exp(sinkage_exponent * n.log_depth);
    out.sigma_cos += n.weight * sigma * n.cos_theta;
    out.sigma_g_sin += n.weight * sigma * n.g_sin;
    out.sigma_g += n.weight * sigma * n.g;
  }
  return out;
}

WheelLoads ContactArc::loads(double sinkage_exponent, double tan_friction) const {
  const auto sums = integrals(sinkage_exponent);
  return {sums.normal_force(tan_friction), sums.torque(tan_friction)};
}

WheelLoads forward_wheel(double sinkage_exponent, double friction_angle_deg, double slip,
                         double theta1, const WheelGeometry& wheel, const SoilParams& soil,
                         int intervals, double exit_angle) {
  if (!(sinkage_exponent > 0.0)) throw std::invalid_argument("sinkage exponent must be > 0");
  const double tan_phi = tan_friction(friction_angle_deg);
  const ContactArc arc(slip, theta1, exit_angle, wheel, soil, intervals);
  const auto loads = arc.loads(sinkage_exponent, tan_phi);
  if (!std::isfinite(loads.normal_force) || !std::isfinite(loads.torque)) {
    throw DataError(DataErrc::invalid_value, "wheel load integrand is not finite");
  }
  return loads;
}

}  // namespace terraprop::terramech
