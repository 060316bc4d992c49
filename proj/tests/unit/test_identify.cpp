#include <gtest/gtest.h>

#include <cmath>

#include "terraprop/error.hpp"
#include "terraprop/terramech/identify.hpp"
#include "terraprop/terramech/interaction_log.hpp"

namespace {

using namespace terraprop;
using namespace terraprop::terramech;

const WheelGeometry kWheel{};
const SoilParams kSoil{};

void expect_round_trip(double n, double phi, double s, double t1) {
  const auto loads = forward_wheel(n, phi, s, t1, kWheel, kSoil);
  const auto id = identify_from_loads(loads.normal_force, loads.torque, s, t1, kWheel, kSoil);
  EXPECT_TRUE(id.converged) << id.diagnostic;
  EXPECT_NEAR(id.sinkage_exponent, n, 1e-3);
  EXPECT_NEAR(id.friction_angle_deg, phi, 0.01);
  EXPECT_TRUE(id.diagnostic.empty());
}

TEST(Identify, RoundTripSoil) { expect_round_trip(1.36, 29.6, 0.2, 0.3); }
TEST(Identify, RoundTripBedrock) { expect_round_trip(0.10, 47.3, 0.2, 0.3); }

TEST(Identify, RoundTripCorners) {
  for (double n : {0.3, 2.0})
    for (double phi : {5.0, 50.0})
      for (double s : {0.05, 0.9})
        for (double t1 : {0.1, 0.5}) expect_round_trip(n, phi, s, t1);
}

TEST(Identify, ZeroTorquePinsFrictionToLowerBound) {
  const auto loads = forward_wheel(1.0, 30.0, 0.2, 0.3, kWheel, kSoil);
  const auto id = identify_from_loads(loads.normal_force, 0.0, 0.2, 0.3, kWheel, kSoil);
  EXPECT_FALSE(id.converged);
  EXPECT_EQ(id.friction_angle_deg, 0.0);
  EXPECT_GT(id.residual_torque, 0.0);
  EXPECT_FALSE(id.diagnostic.empty());
}

TEST(Identify, FromSampleUsesKinematics) {
  const double s = 0.2, t1 = 0.3;
  const auto loads = forward_wheel(1.1, 33.0, s, t1, kWheel, kSoil);
  InteractionSample sample;
  sample.normal_force = loads.normal_force;
  sample.torque = loads.torque;
  sample.omega = 2.0;
  sample.v = (1 - s) * kWheel.slip_radius * 2.0;
  sample.sinkage = kWheel.radius * (1 - std::cos(t1));
  const auto id = identify_dominant(sample, kWheel, kSoil);
  EXPECT_NEAR(id.slip, s, 1e-12);
  EXPECT_NEAR(id.theta1, t1, 1e-12);
  EXPECT_NEAR(id.sinkage_exponent, 1.1, 1e-3);
  EXPECT_NEAR(id.friction_angle_deg, 33.0, 0.01);
}

TEST(Identify, RejectsBadSamples) {
  InteractionSample sample;
  sample.normal_force = 100;
  sample.torque = 5;
  sample.omega = 0.0;
  sample.sinkage = 0.01;
  EXPECT_THROW(identify_dominant(sample, kWheel, kSoil), DataError);
  sample.omega = 2.0;
  sample.sinkage = 0.2;  // deeper than the radius
  EXPECT_THROW(identify_dominant(sample, kWheel, kSoil), DataError);
}

TEST(InteractionLog, SmoothingAveragesWithinLabelRuns) {
  std::vector<InteractionSample> log;
  for (int i = 0; i < 6; ++i) {
    InteractionSample s;
    s.t = 0.1 * i;
    s.normal_force = i < 3 ? 10.0 * i : 100.0;
    s.label = i < 3 ? "soil" : "bedrock";
    log.push_back(s);
  }
  const auto out = smooth_log(log, 0.25);
  EXPECT_NEAR(out[1].normal_force, 10.0, 1e-12);  // mean of 0, 10, 20
  EXPECT_NEAR(out[0].normal_force, 5.0, 1e-12);
  EXPECT_NEAR(out[2].normal_force, 15.0, 1e-12);  // bedrock neighbour excluded
  EXPECT_NEAR(out[3].normal_force, 100.0, 1e-12);
  EXPECT_EQ(smooth_log(log, 0.0)[1].normal_force, 10.0);
}

TEST(InteractionLog, IdentifyLogIsThreadInvariant) {
  std::vector<InteractionSample> log;
  for (int i = 0; i < 12; ++i) {
    const double t1 = 0.15 + 0.02 * i;
    const auto loads = forward_wheel(0.5 + 0.1 * i, 20.0 + i, 0.25, t1, kWheel, kSoil);
    InteractionSample s;
    s.t = i;
    s.normal_force = loads.normal_force;
    s.torque = loads.torque;
    s.omega = 2.0;
    s.v = 0.75 * kWheel.slip_radius * 2.0;
    s.sinkage = kWheel.radius * (1 - std::cos(t1));
    s.label = "soil";
    log.push_back(s);
  }
  log[5].omega = 0.0;
  const auto a = identify_log(log, kWheel, kSoil, {}, 1);
  const auto b = identify_log(log, kWheel, kSoil, {}, 3);
  EXPECT_EQ(a.accepted, 11u);
  EXPECT_EQ(a.rejected, 1u);
  EXPECT_FALSE(a.records[5].rejection.empty());
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(a.records[i].result.sinkage_exponent, b.records[i].result.sinkage_exponent);
    EXPECT_EQ(a.records[i].result.friction_angle_deg, b.records[i].result.friction_angle_deg);
  }
  const auto labeled = labeled_properties(a.records, segmentation::TerrainClassSet::planetary_default());
  EXPECT_EQ(labeled.size(), 11u);
  EXPECT_EQ(labeled[0].class_index, 0);
}

}  // namespace
