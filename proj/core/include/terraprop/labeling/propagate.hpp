#pragma once

#include <cstddef>

#include "terraprop/labeling/camera.hpp"
#include "terraprop/raster.hpp"

namespace terraprop::labeling {

/// Z-depth along the optical axis in metres; 0 marks an invalid reading.
using DepthImage = Raster<float>;

struct PropagationStats {
  std::size_t propagated = 0;     // source labels written (before collisions)
  std::size_t occluded = 0;       // failed the destination depth check
  std::size_t out_of_view = 0;    // behind the camera or outside the image
  std::size_t invalid_depth = 0;  // labelled source pixels without depth
  std::size_t overwritten = 0;    // collisions resolved in favour of a nearer point
};

struct PropagationResult {
  LabelImage labels;
  PropagationStats stats;
};

inline constexpr double kDefaultDepthTolerance = 0.03;

/// Forward-splats every labelled source pixel with valid depth into the
/// destination frame. A label lands on the nearest destination pixel when the
/// projected depth agrees with dst_depth there within `z_tol`; when several
/// source pixels land on one destination pixel the nearest one wins, ties
/// going to the smaller source index. Untouched pixels stay kIgnoreLabel.
PropagationResult propagate_labels(const LabelImage& src_labels, const DepthImage& src_depth,
                                   const Pose& src_pose, const Pose& dst_pose,
                                   const DepthImage& dst_depth, const CameraModel& cam,
                                   double z_tol = kDefaultDepthTolerance, int num_classes = 255);

}  // namespace terraprop::labeling
