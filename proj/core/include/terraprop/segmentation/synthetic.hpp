#pragma once

#include <cstdint>
#include <vector>

#include "terraprop/raster.hpp"
#include "terraprop/segmentation/classes.hpp"

namespace terraprop::segmentation {

/// Procedural planetary-terrain texture corpus.
///
/// Each image is a Voronoi partition with `regions_per_image` cells; every
/// cell draws a class from `class_frequencies` and is filled with that
/// class's texture (see synthetic.cpp for the per-class recipes). Partial
/// annotations are disks dropped inside cells, clipped to the cell and kept
/// `partial_margin` pixels away from cell borders; everything else is
/// kIgnoreLabel. All randomness comes from a 64-bit Mersenne Twister seeded
/// with `seed`, with uniform and normal variates derived from its raw output
/// so the corpus is identical on every platform.
struct SyntheticCorpusConfig {
  int width = 128;
  int height = 128;
  int train_images = 20;
  int test_images = 10;
  int regions_per_image = 5;
  /// Per-class cell probability in class-set order; normalised internally.
  std::vector<double> class_frequencies{0.30, 0.14, 0.14, 0.14, 0.12, 0.16};
  int partial_blobs_per_region = 2;
  int partial_radius_min = 5;
  int partial_radius_max = 12;
  double partial_margin = 4.0;
  std::uint64_t seed = 7;
};

struct SyntheticSample {
  RgbImage image;
  LabelImage full_labels;
  LabelImage partial_labels;
};

struct SyntheticCorpus {
  TerrainClassSet classes;
  std::vector<SyntheticSample> train;
  std::vector<SyntheticSample> test;
};

/// Generated for the six-class planetary_default() class set.
SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusConfig& config = {});

}  // namespace terraprop::segmentation
