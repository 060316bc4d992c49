#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "terraprop/segmentation/classes.hpp"
#include "terraprop/terramech/identify.hpp"

namespace terraprop::terramech {

/// Dominant terrain parameters carried by the property model.
enum class Parameter { sinkage_exponent, friction_angle };

/// Short identifier used in files: "N" or "phi".
std::string_view parameter_id(Parameter p) noexcept;
/// Units tag: "1" for N, "deg" for phi.
std::string_view parameter_units(Parameter p) noexcept;
std::optional<Parameter> parse_parameter(std::string_view id) noexcept;

struct Gaussian {
  double mu = 0.0;
  double sigma = 0.0;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct ClassProperties {
  Gaussian sinkage_exponent;  // N
  Gaussian friction_angle;    // phi, degrees
  std::size_t samples = 0;

  [[nodiscard]] const Gaussian& operator[](Parameter p) const noexcept {
    return p == Parameter::sinkage_exponent ? sinkage_exponent : friction_angle;
  }
  friend bool operator==(const ClassProperties&, const ClassProperties&) = default;
};

/// Per-class Gaussian model of the dominant parameters, indexed like the class set.
class TerrainPropertyModel {
 public:
  TerrainPropertyModel(segmentation::TerrainClassSet classes,
                       std::vector<ClassProperties> entries);

  [[nodiscard]] const segmentation::TerrainClassSet& classes() const noexcept { return classes_; }
  [[nodiscard]] int size() const noexcept { return classes_.size(); }
  [[nodiscard]] const ClassProperties& operator[](int k) const { return entries_.at(k); }
  [[nodiscard]] const std::vector<ClassProperties>& entries() const noexcept { return entries_; }

  friend bool operator==(const TerrainPropertyModel&, const TerrainPropertyModel&) = default;

 private:
  segmentation::TerrainClassSet classes_;
  std::vector<ClassProperties> entries_;
};

/// Class-name keyed entries used to fill classes without data.
using PartialPropertyModel = std::map<std::string, ClassProperties>;

/// Identified properties tagged with the class of the terrain they came from.
struct LabeledProperties {
  int class_index = 0;
  IdentifiedProperties properties;
};

/// Per class: sample mean and maximum-likelihood (divide-by-n) standard
/// deviation of N and phi over converged samples. Classes without samples
/// take `defaults`; a class with fewer than 2 converged samples and no
/// default raises DataError naming it.
TerrainPropertyModel fit_property_model(std::span<const LabeledProperties> samples,
                                        const segmentation::TerrainClassSet& classes,
                                        const PartialPropertyModel& defaults = {});

struct UntraversableNames {
  std::string rock = "rock";
  std::string background = "background";
};

/// Fallbacks for terrain the rover cannot drive on. Rock mirrors the stiffest
/// (smallest mean N) class of `fitted` when given, otherwise the reference
/// bedrock values (0.10, 0.01, 47.3 deg, 18.7 deg). Background is all zeros.
/// Names missing from the class set are skipped.
PartialPropertyModel untraversable_defaults(const segmentation::TerrainClassSet& classes,
                                            const TerrainPropertyModel* fitted = nullptr,
                                            const UntraversableNames& names = {});

/// Reference regression of the planetary classes
/// (soil, stony soil, gravel, bedrock, rock, background).
TerrainPropertyModel reference_property_model();

/// Synthetic identified samples drawn from a property model, one batch of
/// `per_class` per class with positive sigma. When `truncate` is set, draws
/// outside the solver search box are redrawn.
std::vector<LabeledProperties> sample_property_model(const TerrainPropertyModel& model,
                                                     std::size_t per_class, std::uint64_t seed,
                                                     bool truncate = false,
                                                     const SolverConfig& box = {});

}  // namespace terraprop::terramech
