#include "terraprop/segmentation/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace terraprop::segmentation {
namespace {

// Platform-independent variates on top of the (fully specified) mt19937_64.
class CorpusRng {
 public:
  explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1);
  }
  double normal() {  // Box-Muller, one variate per call
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  int categorical(const std::vector<double>& cdf) {
    const double u = uniform() * cdf.back();
    return static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }

 private:
  std::mt19937_64 engine_;
};

// Smooth random field in [-1, 1], bilinear over a coarse lattice.
class ValueNoise {
 public:
  ValueNoise(int height, int width, int cell, CorpusRng& rng)
      : cell_(cell), cols_(width / cell + 2), rows_(height / cell + 2) {
    lattice_.resize(static_cast<std::size_t>(rows_) * cols_);
    for (double& v : lattice_) v = rng.uniform(-1.0, 1.0);
  }
  [[nodiscard]] double at(int r, int c) const {
    const double y = static_cast<double>(r) / cell_;
    const double x = static_cast<double>(c) / cell_;
    const int r0 = static_cast<int>(y);
    const int c0 = static_cast<int>(x);
    const double fy = y - r0;
    const double fx = x - c0;
    auto l = [&](int rr, int cc) { return lattice_[static_cast<std::size_t>(rr) * cols_ + cc]; };
    return (1 - fy) * ((1 - fx) * l(r0, c0) + fx * l(r0, c0 + 1)) +
           fy * ((1 - fx) * l(r0 + 1, c0) + fx * l(r0 + 1, c0 + 1));
  }

 private:
  int cell_;
  int cols_;
  int rows_;
  std::vector<double> lattice_;
};

struct Seed {
  double row;
  double col;
  int cls;
};

// Per-class texture recipes. Base colours are well separated in RGB; the
// texture terms make the std and gradient features informative too.
std::array<double, 3> shade(int cls, int r, int c, CorpusRng& rng, const ValueNoise& smooth,
                            bool stone) {
  auto noisy = [&](std::array<double, 3> base, double sigma, double common) {
    const double shared = sigma > 0 ? common * rng.normal() : 0.0;
    for (double& v : base) v += shared + sigma * rng.normal();
    return base;
  };
  switch (cls) {
    case 0: {  // soil: fine sand with faint ripples
      const double ripple = 6.0 * std::sin(2.0 * std::numbers::pi * (r + 0.5 * c) / 9.0);
      auto px = noisy({200, 155, 95}, 4.0, 3.0);
      for (double& v : px) v += ripple;
      return px;
    }
    case 1:  // stony soil: darker sand speckled with pebbles
      if (stone) return noisy({95, 85, 75}, 6.0, 4.0);
      return noisy({165, 120, 75}, 4.0, 3.0);
    case 2:  // gravel: grey, strong pixel-scale clutter
      return noisy({125, 125, 120}, 22.0, 14.0);
    case 3: {  // bedrock: reddish, smoothly shaded slabs
      auto px = noisy({175, 85, 55}, 2.0, 1.5);
      const double s = 14.0 * smooth.at(r, c);
      for (double& v : px) v += s;
      return px;
    }
    case 4: {  // rock: dark boulders with coarse shading
      auto px = noisy({65, 50, 42}, 7.0, 5.0);
      const double s = 18.0 * smooth.at(r, c);
      for (double& v : px) v += s;
      return px;
    }
    default:  // background: hazy sky
      return noisy({70, 115, 180}, 2.0, 1.0);
  }
}

SyntheticSample make_sample(const SyntheticCorpusConfig& cfg, const std::vector<double>& cdf,
                            CorpusRng& rng) {
  const int h = cfg.height;
  const int w = cfg.width;
  std::vector<Seed> seeds(static_cast<std::size_t>(cfg.regions_per_image));
  for (auto& s : seeds) {
    s.row = rng.uniform(0.0, h);
    s.col = rng.uniform(0.0, w);
    s.cls = rng.categorical(cdf);
  }

  // Nearest seed and distance to the closest Voronoi bisector per pixel.
  std::vector<int> owner(static_cast<std::size_t>(h) * w);
  std::vector<double> margin(owner.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double y = r + 0.5;
      const double x = c + 0.5;
      int best = 0;
      double best_d2 = std::numeric_limits<double>::max();
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const double d2 = (y - seeds[i].row) * (y - seeds[i].row) +
                          (x - seeds[i].col) * (x - seeds[i].col);
        if (d2 < best_d2) {
          best_d2 = d2;
          best = static_cast<int>(i);
        }
      }
      double m = std::numeric_limits<double>::max();
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (static_cast<int>(i) == best || seeds[i].cls == seeds[best].cls) continue;
        const double dy = seeds[i].row - seeds[best].row;
        const double dx = seeds[i].col - seeds[best].col;
        const double d2 = (y - seeds[i].row) * (y - seeds[i].row) +
                          (x - seeds[i].col) * (x - seeds[i].col);
        m = std::min(m, (d2 - best_d2) / (2.0 * std::sqrt(dy * dy + dx * dx)));
      }
      owner[static_cast<std::size_t>(r) * w + c] = best;
      margin[static_cast<std::size_t>(r) * w + c] = m;
    }
  }

  // Pebble mask, only visible inside stony-soil cells.
  std::vector<bool> stone(owner.size(), false);
  const int stones = h * w / 60;
  for (int i = 0; i < stones; ++i) {
    const int sr = rng.integer(0, h - 1);
    const int sc = rng.integer(0, w - 1);
    const int rad = rng.integer(1, 2);
    for (int r = std::max(0, sr - rad); r <= std::min(h - 1, sr + rad); ++r) {
      for (int c = std::max(0, sc - rad); c <= std::min(w - 1, sc + rad); ++c) {
        if ((r - sr) * (r - sr) + (c - sc) * (c - sc) <= rad * rad) {
          stone[static_cast<std::size_t>(r) * w + c] = true;
        }
      }
    }
  }

  const ValueNoise smooth(h, w, 16, rng);
  SyntheticSample sample{RgbImage(h, w, 3), LabelImage(h, w, 1, 0),
                         LabelImage(h, w, 1, kIgnoreLabel)};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t p = static_cast<std::size_t>(r) * w + c;
      const int cls = seeds[owner[p]].cls;
      const auto rgb = shade(cls, r, c, rng, smooth, stone[p]);
      for (int ch = 0; ch < 3; ++ch) {
        sample.image(r, c, ch) =
            static_cast<std::uint8_t>(std::clamp(std::lround(rgb[ch]), 0L, 255L));
      }
      sample.full_labels.data()[p] = static_cast<std::uint8_t>(cls);
    }
  }

  // Partial annotation: disks inside each cell, clipped to the cell interior.
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::vector<std::size_t> interior;
    for (std::size_t p = 0; p < owner.size(); ++p) {
      if (owner[p] == static_cast<int>(i) && margin[p] >= cfg.partial_margin) {
        interior.push_back(p);
      }
    }
    if (interior.empty()) continue;
    for (int b = 0; b < cfg.partial_blobs_per_region; ++b) {
      const std::size_t centre =
          interior[static_cast<std::size_t>(rng.integer(0, static_cast<int>(interior.size()) - 1))];
      const int cr = static_cast<int>(centre) / w;
      const int cc = static_cast<int>(centre) % w;
      const int rad = rng.integer(cfg.partial_radius_min, cfg.partial_radius_max);
      for (int r = std::max(0, cr - rad); r <= std::min(h - 1, cr + rad); ++r) {
        for (int c = std::max(0, cc - rad); c <= std::min(w - 1, cc + rad); ++c) {
          const std::size_t p = static_cast<std::size_t>(r) * w + c;
          if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= rad * rad &&
              owner[p] == static_cast<int>(i) && margin[p] >= cfg.partial_margin) {
            sample.partial_labels.data()[p] = static_cast<std::uint8_t>(seeds[i].cls);
          }
        }
      }
    }
  }
  return sample;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusConfig& config) {
  auto classes = TerrainClassSet::planetary_default();
  if (config.width < 8 || config.height < 8) throw std::invalid_argument("corpus images too small");
  if (config.regions_per_image < 1) throw std::invalid_argument("need >= 1 region per image");
  if (static_cast<int>(config.class_frequencies.size()) != classes.size()) {
    throw std::invalid_argument("class_frequencies must have one entry per class");
  }
  std::vector<double> cdf;
  double acc = 0.0;
  for (double f : config.class_frequencies) {
    if (f < 0.0) throw std::invalid_argument("class frequencies must be non-negative");
    acc += f;
    cdf.push_back(acc);
  }
  if (!(acc > 0.0)) throw std::invalid_argument("class frequencies sum to zero");

  CorpusRng rng(config.seed);
  SyntheticCorpus corpus{std::move(classes), {}, {}};
  for (int i = 0; i < config.train_images; ++i) corpus.train.push_back(make_sample(config, cdf, rng));
  for (int i = 0; i < config.test_images; ++i) corpus.test.push_back(make_sample(config, cdf, rng));
  return corpus;
}

}  // namespace terraprop::segmentation
