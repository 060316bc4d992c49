#pragma once

#include <optional>
#include <string>

#include "terraprop/terramech/wheel_model.hpp"

namespace terraprop::terramech {

/// One steady-state wheel measurement (SI units).
struct InteractionSample {
  double t = 0.0;        // s
  double normal_force = 0.0;  // F_N, N
  double torque = 0.0;   // M_R, N m
  double omega = 0.0;    // rad/s
  double v = 0.0;        // m/s
  double sinkage = 0.0;  // z, m
  std::string label;     // terrain class name; empty when unknown
};

struct SolverConfig {
  double n_min = 0.05;
  double n_max = 2.5;
  double phi_min_deg = 0.0;
  double phi_max_deg = 60.0;
  /// Relative residual on both F_N and M_R required to report convergence.
  double tolerance = 1e-6;
  int max_outer_iterations = 50;
  int quadrature_intervals = kDefaultQuadratureIntervals;
  double exit_angle = 0.0;  // theta1', rad
  double slip_epsilon = kDefaultSlipEpsilon;
};

struct IdentifiedProperties {
  double sinkage_exponent = 0.0;    // N
  double friction_angle_deg = 0.0;  // phi
  double slip = 0.0;
  double theta1 = 0.0;
  bool slip_clamped = false;
  bool converged = false;
  int iterations = 0;
  double residual_normal_force = 0.0;  // model - measured, N
  double residual_torque = 0.0;        // model - measured, N m
  std::string diagnostic;              // empty when converged
};

/// Finds (N, phi) reproducing measured (F_N, M_R) at a known slip and entry
/// angle. Alternates bracketed bisection on N against F_N (decreasing in N)
/// and on phi against M_R (increasing in phi) until a fixed point. When a
/// target lies outside the search box the parameter is pinned to the nearer
/// bound and the result is flagged not converged.
IdentifiedProperties identify_from_loads(double normal_force, double torque, double slip,
                                         double theta1, const WheelGeometry& wheel,
                                         const SoilParams& soil, const SolverConfig& config = {});

/// Computes slip and entry angle from the sample, then identify_from_loads.
/// Throws DataError when the sample violates the slip or sinkage
/// preconditions (zero rim speed, buried wheel, non-positive load).
IdentifiedProperties identify_dominant(const InteractionSample& sample,
                                       const WheelGeometry& wheel, const SoilParams& soil,
                                       const SolverConfig& config = {});

}  // namespace terraprop::terramech
