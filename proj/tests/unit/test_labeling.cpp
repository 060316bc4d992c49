#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>

#include "terraprop/labeling/camera.hpp"
#include "terraprop/labeling/propagate.hpp"

namespace {

using namespace terraprop;
using namespace terraprop::labeling;

const CameraModel kCam{500.0, 500.0, 31.5, 23.5, 64, 48};

Pose rotated(double yaw, const Eigen::Vector3d& t) {
  return Pose(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()).toRotationMatrix(), t);
}

TEST(Camera, BackprojectExamples) {
  EXPECT_TRUE(backproject(kCam.cx, kCam.cy, 2.0, kCam).isApprox(Eigen::Vector3d(0, 0, 2)));
  const CameraModel vga{500.0, 500.0, 319.5, 239.5, 640, 480};
  const auto x = backproject(vga.cx + 100, vga.cy, 2.0, vga);
  EXPECT_NEAR(x.x(), 0.4, 1e-15);
}

TEST(Camera, ProjectInvertsBackproject) {
  for (double u = 0; u < 64; u += 7.3)
    for (double v = 0; v < 48; v += 5.1) {
      const auto p = project(backproject(u, v, 1.7, kCam), kCam);
      EXPECT_TRUE(p.valid);
      EXPECT_NEAR(p.u, u, 1e-9);
      EXPECT_NEAR(p.v, v, 1e-9);
    }
}

TEST(Camera, ProjectionFlagsAndScaleInvariance) {
  const auto c = project({0, 0, 3}, kCam);
  EXPECT_TRUE(c.valid);
  EXPECT_EQ(c.u, kCam.cx);
  EXPECT_FALSE(project({0, 0, -1}, kCam).valid);
  EXPECT_FALSE(project({10, 0, 1}, kCam).valid);
  const Eigen::Vector3d x(0.01, -0.02, 1.3);
  const auto a = project(x, kCam), b = project(2 * x, kCam);
  EXPECT_NEAR(a.u, b.u, 1e-12);
  EXPECT_NEAR(a.v, b.v, 1e-12);
}

TEST(Camera, TransformExamples) {
  const Eigen::Vector3d x(0.3, -0.1, 2.0);
  const Pose src = rotated(0.2, {1, 2, 3});
  EXPECT_TRUE(transform(x, src, src).isApprox(x, 1e-12));
  const Pose shifted = rotated(0.2, Eigen::Vector3d(1, 2, 3) + src.rotation() * Eigen::Vector3d(0.5, 0, 0));
  EXPECT_TRUE(transform(x, src, shifted).isApprox(x - Eigen::Vector3d(0.5, 0, 0), 1e-12));
  const Pose dst = rotated(-0.4, {0, 1, 0});
  EXPECT_LT((transform(transform(x, src, dst), dst, src) - x).norm(), 1e-9);
}

TEST(Camera, PoseValidation) {
  Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
  bad(0, 0) = 1.01;
  EXPECT_THROW(Pose(bad, Eigen::Vector3d::Zero()), std::invalid_argument);
  EXPECT_THROW(Pose(-Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()), std::invalid_argument);
  EXPECT_THROW(Pose::from_quaternion(1, 1, 0, 0, Eigen::Vector3d::Zero()), std::invalid_argument);
  const auto q = Pose::from_quaternion(std::cos(0.25), 0, std::sin(0.25), 0, Eigen::Vector3d::Zero());
  EXPECT_TRUE(q.rotation().isApprox(rotated(0.5, {0, 0, 0}).rotation(), 1e-12));
}

TEST(Camera, IntrinsicsValidation) {
  CameraModel c = kCam;
  c.fx = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = kCam;
  c.cx = 70;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

struct Frame {
  LabelImage labels{48, 64, 1, kIgnoreLabel};
  DepthImage depth{48, 64, 1, 0.0f};
};

Frame wall(double z) {
  Frame f;
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 64; ++c) {
      f.depth(r, c) = static_cast<float>(z);
      f.labels(r, c) = static_cast<std::uint8_t>((r / 8 + c / 8) % 3);
    }
  return f;
}

TEST(Propagate, IdentityPoseIsFilteredIdentity) {
  auto f = wall(2.0);
  f.depth(3, 4) = 0.0f;
  f.labels(5, 5) = kIgnoreLabel;
  const Pose p = rotated(0.1, {1, 0, 0});
  const auto out = propagate_labels(f.labels, f.depth, p, p, f.depth, kCam, 0.03, 3);
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 64; ++c) {
      if (r == 3 && c == 4) {
        EXPECT_EQ(out.labels(r, c), kIgnoreLabel);
      } else {
        EXPECT_EQ(out.labels(r, c), f.labels(r, c)) << r << "," << c;
      }
    }
  EXPECT_EQ(out.stats.invalid_depth, 1u);
  EXPECT_EQ(out.stats.overwritten, 0u);
}

TEST(Propagate, OccludedPointsAreCounted) {
  const auto f = wall(2.0);
  DepthImage nearer(48, 64, 1, 1.5f);
  const Pose p;
  const auto out = propagate_labels(f.labels, f.depth, p, p, nearer, kCam, 0.03, 3);
  EXPECT_EQ(out.stats.occluded, 48u * 64u);
  EXPECT_EQ(out.stats.propagated, 0u);
  for (auto v : out.labels.data()) EXPECT_EQ(v, kIgnoreLabel);
}

TEST(Propagate, NearerPointWinsAndLabelsStayInRange) {
  // Pull the camera back so the surface shrinks and several source pixels
  // collide. The surface leans towards the camera with increasing column, so
  // later source pixels are nearer and must replace earlier ones.
  auto f = wall(2.0);
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 64; ++c) f.depth(r, c) = static_cast<float>(2.0 - 0.001 * c);
  const Pose src;
  const Pose dst(Eigen::Matrix3d::Identity(), {0, 0, -2.0});
  const DepthImage dst_depth(48, 64, 1, 3.97f);
  const auto out = propagate_labels(f.labels, f.depth, src, dst, dst_depth, kCam, 0.1, 3);
  EXPECT_GT(out.stats.overwritten, 0u);
  for (auto v : out.labels.data()) EXPECT_TRUE(v < 3 || v == kIgnoreLabel);

  // Reversed slope: later pixels are farther and never overwrite.
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 64; ++c) f.depth(r, c) = static_cast<float>(2.0 + 0.001 * c);
  const auto farther = propagate_labels(f.labels, f.depth, src, dst, DepthImage(48, 64, 1, 4.03f),
                                        kCam, 0.1, 3);
  EXPECT_EQ(farther.stats.overwritten, 0u);
}

TEST(Propagate, PureTranslationShiftsLabels) {
  // Camera slides 0.04 m right at 2 m range: 10 px to the left.
  const auto f = wall(2.0);
  const Pose src;
  const Pose dst(Eigen::Matrix3d::Identity(), {0.04, 0, 0});
  const auto out = propagate_labels(f.labels, f.depth, src, dst, f.depth, kCam, 0.03, 3);
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 54; ++c) EXPECT_EQ(out.labels(r, c), f.labels(r, c + 10));
  EXPECT_EQ(out.stats.out_of_view, 48u * 10u);
}

TEST(Propagate, ShapeMismatch) {
  const auto f = wall(2.0);
  const DepthImage small(10, 10, 1, 1.0f);
  EXPECT_THROW(propagate_labels(f.labels, small, Pose{}, Pose{}, f.depth, kCam), std::exception);
}

}  // namespace
