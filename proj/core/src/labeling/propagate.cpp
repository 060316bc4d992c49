#include "terraprop/labeling/propagate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "terraprop/error.hpp"

namespace terraprop::labeling {

PropagationResult propagate_labels(const LabelImage& src_labels, const DepthImage& src_depth,
                                   const Pose& src_pose, const Pose& dst_pose,
                                   const DepthImage& dst_depth, const CameraModel& cam,
                                   double z_tol, int num_classes) {
  cam.validate();
  if (!src_labels.same_shape(cam.height, cam.width) || !src_depth.same_shape(cam.height, cam.width) ||
      !dst_depth.same_shape(cam.height, cam.width)) {
    throw DataError(DataErrc::shape_mismatch,
                    "labels and depth images must match the camera resolution");
  }
  if (!(z_tol >= 0.0)) throw std::invalid_argument("depth tolerance must be non-negative");

  const int h = cam.height;
  const int w = cam.width;
  PropagationResult out{LabelImage(h, w, 1, kIgnoreLabel), {}};
  std::vector<double> zbuf(out.labels.pixel_count(), std::numeric_limits<double>::infinity());

  // Relative transform src camera -> dst camera, composed once.
  const Eigen::Matrix3d rot = dst_pose.rotation().transpose() * src_pose.rotation();
  const Eigen::Vector3d trans =
      dst_pose.rotation().transpose() * (src_pose.translation() - dst_pose.translation());

  // Sequential in source index order: a later source pixel replaces an earlier
  // one only if strictly nearer, so equal depths keep the smaller index.
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::uint8_t label = src_labels(r, c);
      if (label == kIgnoreLabel) continue;
      if (label >= num_classes) {
        throw DataError(DataErrc::invalid_value,
                        "source label " + std::to_string(label) + " >= class count");
      }
      const double d = src_depth(r, c);
      if (!(d > 0.0) || !std::isfinite(d)) {
        ++out.stats.invalid_depth;
        continue;
      }
      const Eigen::Vector3d p = rot * backproject(c, r, d, cam) + trans;
      const auto proj = project(p, cam);
      if (!proj.valid) {
        ++out.stats.out_of_view;
        continue;
      }
      const int dc = static_cast<int>(std::lround(proj.u));
      const int dr = static_cast<int>(std::lround(proj.v));
      const double expected = dst_depth(dr, dc);
      if (!(expected > 0.0) || std::abs(p.z() - expected) > z_tol) {
        ++out.stats.occluded;
        continue;
      }
      const std::size_t idx = out.labels.index(dr, dc);
      if (p.z() < zbuf[idx]) {
        if (out.labels.data()[idx] != kIgnoreLabel) ++out.stats.overwritten;
        zbuf[idx] = p.z();
        out.labels.data()[idx] = label;
      }
      ++out.stats.propagated;
    }
  }
  return out;
}

}  // namespace terraprop::labeling
