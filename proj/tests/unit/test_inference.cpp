#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "terraprop/error.hpp"
#include "terraprop/inference/hazard.hpp"
#include "terraprop/inference/mixture.hpp"
#include "terraprop/inference/property_map.hpp"
#include "terraprop/inference/route.hpp"

namespace {

using namespace terraprop;
using namespace terraprop::inference;
using terramech::ClassProperties;
using terramech::reference_property_model;

const auto kModel = reference_property_model();

std::vector<double> one_hot(int k) {
  std::vector<double> p(6, 0.0);
  p[k] = 1.0;
  return p;
}

ProbabilityMap constant_map(int h, int w, const std::vector<double>& p) {
  ProbabilityMap m(h, w, 6);
  for (std::size_t i = 0; i < m.pixel_count(); ++i)
    for (int k = 0; k < 6; ++k) m.pixel(i)[k] = static_cast<float>(p[k]);
  return m;
}

TEST(Mixture, OneHotRecoversComponent) {
  const auto m = mixture_moments(one_hot(0), kModel, Parameter::sinkage_exponent);
  EXPECT_DOUBLE_EQ(m.mu, 1.36);
  EXPECT_NEAR(m.sigma, 0.25, 1e-12);
}

TEST(Mixture, SoilBedrockHalfAndHalf) {
  std::vector<double> p(6, 0.0);
  p[0] = p[3] = 0.5;
  const auto m = mixture_moments(p, kModel, Parameter::sinkage_exponent);
  EXPECT_NEAR(m.mu, 0.73, 1e-12);
  const double second = 0.5 * (1.36 * 1.36 + 0.25 * 0.25) + 0.5 * (0.10 * 0.10 + 0.01 * 0.01);
  EXPECT_NEAR(m.sigma, std::sqrt(second - 0.73 * 0.73), 1e-12);
  EXPECT_NEAR(m.sigma, 0.6543, 1e-4);
}

TEST(Mixture, IdenticalComponents) {
  std::vector<ClassProperties> same(6, ClassProperties{{0.8, 0.3}, {30.0, 5.0}, 0});
  const terramech::TerrainPropertyModel model(kModel.classes(), same);
  const std::vector<double> p{0.1, 0.2, 0.3, 0.15, 0.05, 0.2};
  const auto m = mixture_moments(p, model, Parameter::friction_angle);
  EXPECT_NEAR(m.mu, 30.0, 1e-12);
  EXPECT_NEAR(m.sigma, 5.0, 1e-9);
}

TEST(Mixture, Invariants) {
  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(0.5, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(6);
    double sum = 0;
    for (auto& v : p) sum += v = g(rng);
    for (auto& v : p) v /= sum;
    for (auto param : {Parameter::sinkage_exponent, Parameter::friction_angle}) {
      const auto m = mixture_moments(p, kModel, param);
      double lo = INFINITY, hi = -INFINITY, within = 0;
      for (int k = 0; k < 6; ++k) {
        if (p[k] <= 0) continue;
        lo = std::min(lo, kModel[k][param].mu);
        hi = std::max(hi, kModel[k][param].mu);
        within += p[k] * kModel[k][param].sigma * kModel[k][param].sigma;
      }
      EXPECT_GE(m.mu, lo - 1e-12);
      EXPECT_LE(m.mu, hi + 1e-12);
      EXPECT_GE(m.sigma * m.sigma, within - 1e-9);
    }
  }
}

TEST(Mixture, RejectsBadProbabilityVectors) {
  EXPECT_THROW(mixture_moments(std::vector<double>(5, 0.2), kModel, Parameter::sinkage_exponent),
               DataError);
  EXPECT_THROW(mixture_moments(std::vector<double>{0.5, 0.6, 0, 0, 0, 0}, kModel,
                               Parameter::sinkage_exponent),
               DataError);
}

TEST(MixturePdf, IntegratesToOne) {
  const std::vector<double> p{0.3, 0.2, 0.2, 0.2, 0.1, 0.0};
  for (auto param : {Parameter::sinkage_exponent, Parameter::friction_angle}) {
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < 5; ++k) {
      lo = std::min(lo, kModel[k][param].mu - 8 * kModel[k][param].sigma);
      hi = std::max(hi, kModel[k][param].mu + 8 * kModel[k][param].sigma);
    }
    // Composite Simpson fine enough to resolve the narrow bedrock component.
    const int n = 400000;
    const double h = (hi - lo) / n;
    double sum = mixture_pdf(p, kModel, param, lo) + mixture_pdf(p, kModel, param, hi);
    for (int i = 1; i < n; ++i) {
      const double f = mixture_pdf(p, kModel, param, lo + i * h);
      EXPECT_GE(f, 0.0);
      sum += (i % 2 ? 4 : 2) * f;
    }
    EXPECT_NEAR(sum * h / 3, 1.0, 1e-6);
  }
}

TEST(MixturePdf, OneHotIsNormalDensity) {
  const double x = 1.5;
  const double z = (x - 1.36) / 0.25;
  EXPECT_NEAR(mixture_pdf(one_hot(0), kModel, Parameter::sinkage_exponent, x),
              std::exp(-0.5 * z * z) / (0.25 * std::sqrt(2 * std::numbers::pi)), 1e-12);
}

TEST(MixturePdf, ZeroSigmaComponentIsDegenerate) {
  EXPECT_THROW(mixture_pdf(one_hot(5), kModel, Parameter::sinkage_exponent, 0.0), DataError);
}

TEST(PropertyMaps, OneHotBedrockIsConstant) {
  const auto maps = infer_property_maps(constant_map(7, 9, one_hot(3)), kModel);
  for (float v : maps.sinkage_exponent.mean.data()) EXPECT_NEAR(v, 0.10, 1e-6);
  for (float v : maps.sinkage_exponent.std.data()) EXPECT_NEAR(v, 0.01, 1e-6);
  for (float v : maps.friction_angle.mean.data()) EXPECT_NEAR(v, 47.3, 1e-5);
}

TEST(PropertyMaps, UniformProbabilitiesGiveMeanOfMeans) {
  const auto maps = infer_property_maps(constant_map(4, 4, std::vector<double>(6, 1.0 / 6)), kModel);
  const double expected = (1.36 + 1.28 + 0.92 + 0.10 + 0.10 + 0.0) / 6;
  for (float v : maps.sinkage_exponent.mean.data()) EXPECT_NEAR(v, expected, 1e-6);
}

TEST(PropertyMaps, MatchesPerPixelMomentsAndThreads) {
  ProbabilityMap probs(16, 16, 6);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
    auto px = probs.pixel(i);
    float sum = 0;
    for (auto& v : px) sum += v = u(rng);
    for (auto& v : px) v /= sum;
  }
  const auto one = infer_property_maps(probs, kModel, 1);
  const auto four = infer_property_maps(probs, kModel, 4);
  EXPECT_EQ(one.sinkage_exponent.mean, four.sinkage_exponent.mean);
  EXPECT_EQ(one.friction_angle.std, four.friction_angle.std);
  for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
    const auto m = mixture_moments(probs.pixel(i), kModel, Parameter::friction_angle);
    EXPECT_EQ(one.friction_angle.mean.data()[i], static_cast<float>(m.mu));
    EXPECT_EQ(one.friction_angle.std.data()[i], static_cast<float>(m.sigma));
  }
}

TEST(PropertyMaps, ClassCountMismatch) {
  EXPECT_THROW(infer_property_maps(ProbabilityMap(2, 2, 5, 0.2f), kModel), DataError);
}

PropertyMaps two_region_maps() {
  // Columns 0..4 soil, 5..9 bedrock.
  ProbabilityMap probs(3, 10, 6, 0.0f);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 10; ++c) probs(r, c, c < 5 ? 0 : 3) = 1.0f;
  return infer_property_maps(probs, kModel);
}

TEST(Route, BilinearMatchesHandInterpolation) {
  PropertyMaps maps;
  maps.sinkage_exponent.mean = Raster<float>(2, 2, 1);
  maps.sinkage_exponent.mean.data() = {0.0f, 1.0f, 2.0f, 3.0f};
  maps.sinkage_exponent.std = Raster<float>(2, 2, 1);
  maps.sinkage_exponent.std.data() = {0.0f, 1.0f, 1.0f, 2.0f};
  maps.friction_angle = maps.sinkage_exponent;
  maps.friction_angle.parameter = Parameter::friction_angle;
  const Route route{{{0, {{0.25, 0.5, {}}}}}};
  const auto pred = predict_route(maps, route);
  const auto& p = pred.wheels[0].points[0];
  // Weights: (1-0.25)(1-0.5), (1-0.25)0.5, 0.25(1-0.5), 0.25*0.5.
  EXPECT_NEAR(p.mu_n, 0.375 * 0 + 0.375 * 1 + 0.125 * 2 + 0.125 * 3, 1e-7);
  EXPECT_NEAR(p.sigma_n, std::sqrt(0.375 * 0 + 0.375 * 1 + 0.125 * 1 + 0.125 * 4), 1e-7);
}

TEST(Route, CrossingABoundaryIsMonotone) {
  const auto maps = two_region_maps();
  Route route{{{0, {}}}};
  for (double c = 0; c <= 9.0; c += 0.25) route.wheels[0].points.push_back({1.0, c, {}});
  const auto pred = predict_route(maps, route);
  const auto& pts = pred.wheels[0].points;
  EXPECT_NEAR(pts.front().mu_n, 1.36, 1e-6);
  EXPECT_NEAR(pts.back().mu_n, 0.10, 1e-6);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LE(pts[i].mu_n, pts[i - 1].mu_n + 1e-12);
}

TEST(Route, WheelsAreIndependent) {
  const auto maps = two_region_maps();
  const Route a{{{0, {{0, 1, {}}, {1, 2, {}}}}, {1, {{2, 7.5, {}}}}}};
  const Route b{{{1, {{2, 7.5, {}}}}, {0, {{0, 1, {}}, {1, 2, {}}}}}};
  const auto pa = predict_route(maps, a);
  const auto pb = predict_route(maps, b);
  EXPECT_EQ(pa.wheels[0].points[1].mu_phi, pb.wheels[1].points[1].mu_phi);
  EXPECT_EQ(pa.wheels[1].points[0].sigma_n, pb.wheels[0].points[0].sigma_n);
}

TEST(Route, OutOfBoundsPoint) {
  const Route route{{{0, {{0, 9.5, {}}}}}};
  EXPECT_THROW(predict_route(two_region_maps(), route), DataError);
}

TEST(FullScaleError, Examples) {
  const std::vector<double> pred{1.2}, truth{1.4};
  EXPECT_NEAR(full_scale_error(pred, truth, 2.0), 10.0, 1e-9);
  EXPECT_EQ(full_scale_error(truth, truth, 2.0), 0.0);
  const std::vector<double> p2{1.7, 0.3}, t2{1.5, 0.6};
  const std::vector<double> p3{11.7, 10.3}, t3{11.5, 10.6};
  EXPECT_NEAR(full_scale_error(p2, t2, 2.0), full_scale_error(p3, t3, 2.0), 1e-9);
  EXPECT_NEAR(full_scale_error(p2, t2, 4.0), full_scale_error(p2, t2, 2.0) / 2, 1e-12);
  EXPECT_THROW(full_scale_error(std::vector<double>{}, std::vector<double>{}, 2.0), std::invalid_argument);
}

TEST(IntervalCoverage, Examples) {
  const std::vector<double> mu{1, 2, 3}, sd{0.1, 0.1, 0.1};
  EXPECT_EQ(interval_coverage(mu, sd, mu), 1.0);
  const std::vector<double> truth{1.05, 2.15, 3.0};
  EXPECT_NEAR(interval_coverage(mu, sd, truth), 2.0 / 3, 1e-12);
  EXPECT_EQ(interval_coverage(mu, sd, truth, 2.0), 1.0);
}

TEST(Hazard, BedrockAndSoilAgainstSoftLimit) {
  HazardThresholds t;
  t.n_max = 1.0;
  const auto bedrock = hazard_flags(infer_property_maps(constant_map(5, 5, one_hot(3)), kModel), t);
  EXPECT_EQ(bedrock.summary.soft, 0u);
  const auto soil = hazard_flags(infer_property_maps(constant_map(5, 5, one_hot(0)), kModel), t);
  EXPECT_EQ(soil.summary.soft, 25u);
  for (auto f : soil.flags.data()) EXPECT_EQ(f, kSoft);
}

TEST(Hazard, InfiniteThresholdsFlagNothing) {
  const auto r = hazard_flags(two_region_maps(), HazardThresholds{});
  EXPECT_EQ(r.summary.any, 0u);
  for (auto f : r.flags.data()) EXPECT_EQ(f, 0);
}

TEST(Hazard, FlagsAreIndependentBits) {
  HazardThresholds t;
  t.n_max = 1.0;
  t.phi_min_deg = 40.0;
  t.sigma_phi_max = 10.0;
  const auto r = hazard_flags(infer_property_maps(constant_map(1, 1, one_hot(0)), kModel), t);
  EXPECT_EQ(r.flags.data()[0], kSoft | kSlippery);
  const auto b = hazard_flags(infer_property_maps(constant_map(1, 1, one_hot(3)), kModel), t);
  EXPECT_EQ(b.flags.data()[0], kUncertain);
}

}  // namespace
