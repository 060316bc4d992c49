#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "terraprop/inference/hazard.hpp"
#include "terraprop/io/tensor_io.hpp"
#include "terraprop/segmentation/classifier.hpp"
#include "terraprop/terramech/identify.hpp"

namespace terraprop::io {

/// Optional input files named by a config; relative paths resolve against
/// the config file's directory and must exist when the config is loaded.
struct PipelinePaths {
  std::optional<std::filesystem::path> class_set;
  std::optional<std::filesystem::path> classifier;
  std::optional<std::filesystem::path> property_model;
  std::optional<std::filesystem::path> camera;
};

struct PipelineConfig {
  PipelinePaths paths;
  terramech::WheelGeometry wheel;
  terramech::SoilParams soil;
  terramech::SolverConfig solver;
  segmentation::FeatureConfig features;
  segmentation::TrainingHyperparams training;
  double weight_constant = segmentation::kDefaultWeightConstant;
  double smoothing_window_s = 0.5;
  inference::HazardThresholds hazard;
  double full_scale_n = 2.0;
  double full_scale_phi_deg = 60.0;
  double depth_tolerance = 0.03;  // m
  std::uint64_t seed = 0;
};

/// Expected unit tags: {"length": "m", "pressure": "Pa", "angle": "deg"}.
Json expected_units();

/// Parses a config document. Every section is optional except "units", which
/// must carry exactly the expected tags. Unknown keys are rejected so that a
/// misspelt setting cannot be silently ignored. `base_dir` anchors relative paths.
PipelineConfig parse_pipeline_config(const Json& j, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Full document with every default filled in (hazard limits that are
/// infinite are omitted).
Json pipeline_config_to_json(const PipelineConfig& config);

}  // namespace terraprop::io
