#include "terraprop/labeling/camera.hpp"

#include <cmath>
#include <stdexcept>

#include "terraprop/error.hpp"

namespace terraprop::labeling {

void CameraModel::validate() const {
  if (!(fx > 0.0 && fy > 0.0)) throw std::invalid_argument("focal lengths must be positive");
  if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
  if (!(cx >= 0.0 && cy >= 0.0 && cx <= width && cy <= height)) {
    throw std::invalid_argument("principal point must lie inside the image");
  }
}

Pose::Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho <= 1e-9)) throw std::invalid_argument("pose rotation is not orthonormal");
  if (!(rotation.determinant() > 0.0)) throw std::invalid_argument("pose rotation has det != +1");
  if (!translation.allFinite()) throw std::invalid_argument("pose translation must be finite");
}

Pose Pose::from_quaternion(double qw, double qx, double qy, double qz,
                           const Eigen::Vector3d& translation) {
  Eigen::Quaterniond q(qw, qx, qy, qz);
  if (!(std::abs(q.norm() - 1.0) <= 1e-6)) {
    throw std::invalid_argument("pose quaternion is not unit length");
  }
  q.normalize();
  return Pose(q.toRotationMatrix(), translation);
}

Eigen::Vector3d backproject(double u, double v, double depth, const CameraModel& cam) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw DataError(DataErrc::invalid_value, "invalid depth for backprojection");
  }
  if (!(u >= -0.5 && v >= -0.5 && u < cam.width - 0.5 && v < cam.height - 0.5)) {
    throw std::invalid_argument("pixel outside the image");
  }
  return {(u - cam.cx) / cam.fx * depth, (v - cam.cy) / cam.fy * depth, depth};
}

Eigen::Vector3d transform(const Eigen::Vector3d& point, const Pose& source,
                          const Pose& destination) {
  return destination.to_camera(source.to_world(point));
}

Projection project(const Eigen::Vector3d& point, const CameraModel& cam, double min_depth) {
  Projection out;
  if (!(point.z() > min_depth)) return out;
  out.u = cam.fx * point.x() / point.z() + cam.cx;
  out.v = cam.fy * point.y() / point.z() + cam.cy;
  // Pixel centres sit on integer coordinates, so pixel i covers [i - 0.5, i + 0.5).
  out.valid = out.u >= -0.5 && out.v >= -0.5 && out.u < cam.width - 0.5 &&
              out.v < cam.height - 0.5;
  return out;
}

}  // namespace terraprop::labeling
