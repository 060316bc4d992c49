#include "terraprop/terramech/identify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "terraprop/error.hpp"

namespace terraprop::terramech {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Bisection stops once the bracket is this narrow (parameter units).
constexpr double kBracketWidth = 1e-13;

struct RootResult {
  double x = 0.0;
  bool bracketed = true;
};

// Root of an increasing function f on [lo, hi], searched first in a window of
// half-width `step` around `guess` that grows until it brackets the root.
template <class F>
RootResult bisect_increasing(const F& f, double lo, double hi, double guess, double step) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo > 0.0) return {lo, false};
  if (f_hi < 0.0) return {hi, false};

  double a = lo;
  double b = hi;
  if (step > 0.0) {
    for (double d = step; d < hi - lo; d *= 8.0) {
      const double ta = std::max(lo, guess - d);
      const double tb = std::min(hi, guess + d);
      if (f(ta) <= 0.0 && f(tb) >= 0.0) {
        a = ta;
        b = tb;
        break;
      }
    }
  }
  while (b - a > kBracketWidth) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return {mid, true};
    (fm < 0.0 ? a : b) = mid;
  }
  return {0.5 * (a + b), true};
}

double relative(double residual, double target) {
  return std::abs(residual) / std::max(std::abs(target), 1e-300);
}

}  // namespace

IdentifiedProperties identify_from_loads(double normal_force, double torque, double slip,
                                         double theta1, const WheelGeometry& wheel,
                                         const SoilParams& soil, const SolverConfig& config) {
  if (!(config.n_min > 0.0 && config.n_min < config.n_max)) {
    throw std::invalid_argument("sinkage exponent search box must satisfy 0 < n_min < n_max");
  }
  if (!(config.phi_min_deg >= 0.0 && config.phi_min_deg < config.phi_max_deg &&
        config.phi_max_deg < 90.0)) {
    throw std::invalid_argument("friction angle search box must lie within [0, 90) degrees");
  }
  const ContactArc arc(slip, theta1, config.exit_angle, wheel, soil, config.quadrature_intervals);
  const double tan_lo = std::tan(config.phi_min_deg * kDegToRad);
  const double tan_hi = std::tan(config.phi_max_deg * kDegToRad);

  IdentifiedProperties out;
  out.slip = slip;
  out.theta1 = theta1;

  double n = 0.5 * (config.n_min + config.n_max);
  double phi = 0.5 * (config.phi_min_deg + config.phi_max_deg) * kDegToRad;
  double n_step = 0.0;
  double phi_step = 0.0;
  bool n_bracketed = false;
  bool phi_bracketed = false;

  for (int it = 1; it <= config.max_outer_iterations; ++it) {
    out.iterations = it;
    const double tan_phi = std::tan(phi);
    // F_N decreases with N, so bisect on -(F_N - target).
    const auto n_root = bisect_increasing(
        [&](double x) { return normal_force - arc.integrals(x).normal_force(tan_phi); },
        config.n_min, config.n_max, n, n_step);
    const auto sums = arc.integrals(n_root.x);
    const auto phi_root = bisect_increasing(
        [&](double x) { return sums.torque(std::tan(x)) - torque; }, std::atan(tan_lo),
        std::atan(tan_hi), phi, phi_step);

    const double dn = std::abs(n_root.x - n);
    const double dphi = std::abs(phi_root.x - phi);
    n = n_root.x;
    phi = phi_root.x;
    n_bracketed = n_root.bracketed;
    phi_bracketed = phi_root.bracketed;
    n_step = std::max(4.0 * dn, 64 * kBracketWidth);
    phi_step = std::max(4.0 * dphi, 64 * kBracketWidth);
    if (it > 1 && dn <= 4 * kBracketWidth && dphi <= 4 * kBracketWidth) break;
  }

  const auto model = arc.loads(n, std::tan(phi));
  out.sinkage_exponent = n;
  out.friction_angle_deg = phi / kDegToRad;
  out.residual_normal_force = model.normal_force - normal_force;
  out.residual_torque = model.torque - torque;
  const bool small = relative(out.residual_normal_force, normal_force) <= config.tolerance &&
                     relative(out.residual_torque, torque) <= config.tolerance;
  out.converged = small && n_bracketed && phi_bracketed;
  if (!out.converged) {
    std::ostringstream msg;
    if (!n_bracketed) msg << "F_N target not reachable within N in [" << config.n_min << ", "
                          << config.n_max << "]; ";
    if (!phi_bracketed) msg << "M_R target not reachable within phi in [" << config.phi_min_deg
                            << ", " << config.phi_max_deg << "] deg; ";
    if (!small) msg << "residuals above tolerance after " << out.iterations << " iterations";
    out.diagnostic = msg.str();
  }
  return out;
}

IdentifiedProperties identify_dominant(const InteractionSample& sample,
                                       const WheelGeometry& wheel, const SoilParams& soil,
                                       const SolverConfig& config) {
  if (!(sample.normal_force > 0.0)) {
    throw DataError(DataErrc::invalid_value, "vertical load F_N must be positive");
  }
  if (!(sample.torque >= 0.0)) {
    throw DataError(DataErrc::invalid_value, "driving torque M_R must be non-negative");
  }
  const auto slip = slip_ratio(sample.omega, sample.v, wheel.slip_radius, config.slip_epsilon);
  const double theta1 = entry_angle(sample.sinkage, wheel.radius);
  auto out = identify_from_loads(sample.normal_force, sample.torque, slip.value, theta1, wheel,
                                 soil, config);
  out.slip_clamped = slip.clamped;
  return out;
}

}  // namespace terraprop::terramech
