#pragma once

#include <vector>

namespace terraprop::terramech {

/// Rigid lugged wheel. Lengths in metres.
struct WheelGeometry {
  double radius = 0.140;        // r, soil-contact radius (torque arm)
  double width = 0.150;         // b
  double lug_height = 0.010;    // h
  double slip_radius = 0.145;   // r_s, used only for slip kinematics

  /// Throws std::invalid_argument unless r, b, h, r_s > 0 and r <= r_s <= r + h.
  void validate() const;
  friend bool operator==(const WheelGeometry&, const WheelGeometry&) = default;
};

/// Empirical soil constants held fixed during identification (SI units).
/// k_c and k_phi carry exponent-dependent units and are used as plain
/// numbers in the pressure-sinkage law, scaled from kPa to Pa.
struct SoilParams {
  double k_c = 100.0e3;          // cohesive modulus
  double k_phi = 1400.0e3;       // frictional modulus
  double cohesion = 1.0e3;       // c, Pa
  double shear_modulus = 0.016;  // K, shear deformation modulus, m

  void validate() const;
  friend bool operator==(const SoilParams&, const SoilParams&) = default;
};

struct SlipRatio {
  double value = 0.0;
  bool clamped = false;  // raw (r_s w - v) / (r_s w) fell outside [0, 1]
};

inline constexpr double kDefaultSlipEpsilon = 1e-3;  // m/s of rim speed

/// s = (r_s w - v) / (r_s w), clamped into [0, 1]. Throws DataError when the
/// rim speed r_s * w does not exceed `epsilon` (slip undefined).
SlipRatio slip_ratio(double omega, double v, double slip_radius,
                     double epsilon = kDefaultSlipEpsilon);

/// theta1 = arccos(1 - z / r) for sinkage z in [0, r).
double entry_angle(double sinkage, double radius);

/// Bekker normal stress (Pa) at contact angle theta for an arc entering at theta1.
double normal_stress(double theta, double sinkage_exponent, double theta1,
                     const WheelGeometry& wheel, const SoilParams& soil);

/// Janosi shear displacement (m) along the arc.
double shear_displacement(double theta, double slip, double theta1, double radius);

/// Janosi shear stress (Pa); friction angle in degrees.
double shear_stress(double theta, double sinkage_exponent, double friction_angle_deg,
                    double slip, double theta1, const WheelGeometry& wheel,
                    const SoilParams& soil);

struct WheelLoads {
  double normal_force = 0.0;  // F_N, N
  double torque = 0.0;        // M_R, N m
};

inline constexpr int kDefaultQuadratureIntervals = 200;

/// Quadrature sums over the contact arc for one sinkage exponent. Loads are
/// affine in tan(phi):
///   F_N = r b (S_sigma_cos + c S_g_sin + tan(phi) S_sigma_g_sin)
///   M_R = r^2 b (c S_g + tan(phi) S_sigma_g)
/// with g = 1 - exp(-j / K) the mobilised shear fraction.
struct ArcIntegrals {
  double radius = 0.0;
  double width = 0.0;
  double cohesion = 0.0;
  double sigma_cos = 0.0;
  double sigma_g_sin = 0.0;
  double sigma_g = 0.0;
  double g_sin = 0.0;
  double g = 0.0;

  [[nodiscard]] double normal_force(double tan_friction) const noexcept {
    return radius * width * (sigma_cos + cohesion * g_sin + tan_friction * sigma_g_sin);
  }
  [[nodiscard]] double torque(double tan_friction) const noexcept {
    return radius * radius * width * (cohesion * g + tan_friction * sigma_g);
  }
};

/// Contact arc discretised for composite Simpson quadrature in t, where
/// theta = theta1 - (theta1 + exit_angle) t^3 clusters nodes at the entry
/// point and removes the (theta1 - theta)^N endpoint singularity. Everything that
/// depends only on (slip, theta1, exit angle, wheel, soil) is cached, so each
/// sinkage exponent costs one exp per node and friction angles are free.
class ContactArc {
 public:
  ContactArc(double slip, double theta1, double exit_angle, const WheelGeometry& wheel,
             const SoilParams& soil, int intervals = kDefaultQuadratureIntervals);

  [[nodiscard]] ArcIntegrals integrals(double sinkage_exponent) const;
  [[nodiscard]] WheelLoads loads(double sinkage_exponent, double tan_friction) const;

  [[nodiscard]] double theta1() const noexcept { return theta1_; }
  [[nodiscard]] double slip() const noexcept { return slip_; }

 private:
  struct Node {
    double weight;      // Simpson weight times h/3 times dtheta/dt
    double cos_theta;
    double log_depth;   // ln(r (cos theta - cos theta1)); -inf at theta1
    double g;           // 1 - exp(-j / K)
    double g_sin;       // g * sin(theta)
  };

  double slip_;
  double theta1_;
  double radius_;
  double width_;
  double stiffness_;  // k_c / b + k_phi
  double cohesion_;
  double sum_g_ = 0.0;
  double sum_g_sin_ = 0.0;
  std::vector<Node> nodes_;
};

/// F_N = r b Int [sigma cos + tau sin], M_R = r^2 b Int tau over
/// [-exit_angle, theta1] by composite Simpson with `intervals` (even) panels
/// in the substituted variable described at ContactArc.
WheelLoads forward_wheel(double sinkage_exponent, double friction_angle_deg, double slip,
                         double theta1, const WheelGeometry& wheel, const SoilParams& soil,
                         int intervals = kDefaultQuadratureIntervals, double exit_angle = 0.0);

}  // namespace terraprop::terramech
