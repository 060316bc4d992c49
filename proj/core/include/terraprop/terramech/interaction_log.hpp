#pragma once

#include <span>
#include <string>
#include <vector>

#include "terraprop/segmentation/classes.hpp"
#include "terraprop/terramech/identify.hpp"
#include "terraprop/terramech/property_model.hpp"

namespace terraprop::terramech {

/// Centred moving average of every measured channel over samples within
/// +/- window/2 seconds that belong to the same contiguous label run.
/// A non-positive window returns the input unchanged.
std::vector<InteractionSample> smooth_log(std::span<const InteractionSample> samples,
                                          double window_seconds);

struct IdentificationRecord {
  InteractionSample sample;
  bool accepted = false;        // passed slip/sinkage/load preconditions
  IdentifiedProperties result;  // meaningful only when accepted
  std::string rejection;        // reason when not accepted
};

struct IdentificationReport {
  std::vector<IdentificationRecord> records;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t converged = 0;
};

/// Identifies every sample independently; failures become rejection records.
IdentificationReport identify_log(std::span<const InteractionSample> samples,
                                  const WheelGeometry& wheel, const SoilParams& soil,
                                  const SolverConfig& config = {}, int threads = 1);

/// Accepted, labelled records mapped onto class indices. Unlabelled records are
/// skipped; a label not in the class set raises DataError.
std::vector<LabeledProperties> labeled_properties(std::span<const IdentificationRecord> records,
                                                  const segmentation::TerrainClassSet& classes);

}  // namespace terraprop::terramech
