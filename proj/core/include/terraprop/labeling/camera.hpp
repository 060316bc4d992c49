#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace terraprop::labeling {

/// Pinhole intrinsics, no distortion. Pixel (row, col) has its centre at
/// (u, v) = (col, row).
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// Throws std::invalid_argument unless fx, fy > 0 and (cx, cy) is inside the image.
  void validate() const;
};

/// Rigid camera-to-world transform: x_world = rotation * x_cam + translation.
class Pose {
 public:
  Pose() = default;
  /// Throws std::invalid_argument unless R^T R = I within 1e-9 and det R = +1.
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  /// From a unit quaternion (w, x, y, z); |q| must be 1 within 1e-6.
  static Pose from_quaternion(double qw, double qx, double qy, double qz,
                              const Eigen::Vector3d& translation);

  [[nodiscard]] const Eigen::Matrix3d& rotation() const noexcept { return rotation_; }
  [[nodiscard]] const Eigen::Vector3d& translation() const noexcept { return translation_; }

  [[nodiscard]] Eigen::Vector3d to_world(const Eigen::Vector3d& cam) const {
    return rotation_ * cam + translation_;
  }
  [[nodiscard]] Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const {
    return rotation_.transpose() * (world - translation_);
  }

 private:
  Eigen::Matrix3d rotation_ = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
};

/// Camera-frame point for pixel (u, v) at Z-depth `depth` (> 0).
Eigen::Vector3d backproject(double u, double v, double depth, const CameraModel& cam);

/// Re-expresses a point from the source camera frame in the destination camera frame.
Eigen::Vector3d transform(const Eigen::Vector3d& point, const Pose& source, const Pose& destination);

struct Projection {
  double u = 0.0;
  double v = 0.0;
  bool valid = false;  // in front of the camera (Z > min_depth) and inside the image
};

inline constexpr double kMinProjectionDepth = 1e-6;

Projection project(const Eigen::Vector3d& point, const CameraModel& cam,
                   double min_depth = kMinProjectionDepth);

}  // namespace terraprop::labeling
