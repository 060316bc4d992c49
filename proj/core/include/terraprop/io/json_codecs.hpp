#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "terraprop/inference/route.hpp"
#include "terraprop/io/csv.hpp"
#include "terraprop/io/tensor_io.hpp"
#include "terraprop/labeling/camera.hpp"
#include "terraprop/segmentation/classifier.hpp"
#include "terraprop/segmentation/metrics.hpp"
#include "terraprop/segmentation/ratio_experiment.hpp"
#include "terraprop/terramech/interaction_log.hpp"
#include "terraprop/terramech/property_model.hpp"

namespace terraprop::io {

// Class set: {"classes": [{"name": "...", "color": [r, g, b]}, ...]}
Json class_set_to_json(const segmentation::TerrainClassSet& classes);
segmentation::TerrainClassSet class_set_from_json(const Json& j);

// Classifier: {"format", "classes", "feature_config", "weights": K rows of F+1}
Json classifier_to_json(const segmentation::PixelClassifier& classifier);
segmentation::PixelClassifier classifier_from_json(const Json& j);

// Property model: {class: {"N": {"mu", "sigma", "n"}, "phi": {...}}} in class order.
Json property_model_to_json(const terramech::TerrainPropertyModel& model);
/// Colours come from `classes` when given (names must match in order),
/// otherwise from the planetary defaults where names match.
terramech::TerrainPropertyModel property_model_from_json(
    const Json& j, const std::optional<segmentation::TerrainClassSet>& classes = std::nullopt);
/// FNV-1a 64-bit hash of the canonical model JSON, as 16 hex digits.
std::string model_hash(const terramech::TerrainPropertyModel& model);

// Camera intrinsics: {"fx", "fy", "cx", "cy", "width", "height"}
Json camera_to_json(const labeling::CameraModel& cam);
labeling::CameraModel camera_from_json(const Json& j);

// Poses: frame,qw,qx,qy,qz,tx,ty,tz (camera-to-world).
std::map<std::string, labeling::Pose> poses_from_csv(const CsvTable& table);
std::string poses_to_csv(const std::vector<std::pair<std::string, labeling::Pose>>& poses);

// Interaction log: t,F_N,M_R,omega,v,z,label
std::vector<terramech::InteractionSample> interaction_log_from_csv(const CsvTable& table);
std::string interaction_log_to_csv(std::span<const terramech::InteractionSample> samples);

// Identification report: one row per sample, accepted or with a rejection reason.
std::string identification_report_to_csv(const terramech::IdentificationReport& report);
std::vector<terramech::IdentificationRecord> identification_report_from_csv(const CsvTable& table);

// Route input: wheel,row,col[,arclength][,truth_N,truth_phi]
struct RouteInput {
  inference::Route route;
  /// Per wheel, per point: aligned in-situ (N, phi) when the file carries it.
  std::vector<std::vector<std::optional<std::pair<double, double>>>> truth;
};
RouteInput route_from_csv(const CsvTable& table);
/// Copies RouteInput truth into the prediction.
void attach_truth(inference::RoutePrediction& prediction, const RouteInput& input);
// wheel,index,row,col,mu_N,sigma_N,mu_phi,sigma_phi,truth_N,truth_phi
std::string route_prediction_to_csv(const inference::RoutePrediction& prediction);

// Segmentation metrics, long format: metric,class,value
std::string metrics_to_csv(const segmentation::SegmentationMetrics& m,
                           const segmentation::TerrainClassSet& classes);
std::string metrics_table(const segmentation::SegmentationMetrics& m,
                          const segmentation::ConfusionMatrix& cm,
                          const segmentation::TerrainClassSet& classes);
std::string confusion_to_csv(const segmentation::ConfusionMatrix& cm,
                             const segmentation::TerrainClassSet& classes);
std::string ratio_results_to_csv(std::span<const segmentation::RatioResult> rows);

/// Corpus directory: manifest.json plus PPM images and label rasters.
void write_corpus(const std::filesystem::path& dir, const segmentation::SyntheticCorpus& corpus);
segmentation::SyntheticCorpus read_corpus(const std::filesystem::path& manifest);

}  // namespace terraprop::io
