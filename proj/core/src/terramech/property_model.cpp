#include "terraprop/terramech/property_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "terraprop/error.hpp"

namespace terraprop::terramech {

std::string_view parameter_id(Parameter p) noexcept {
  return p == Parameter::sinkage_exponent ? "N" : "phi";
}

std::string_view parameter_units(Parameter p) noexcept {
  return p == Parameter::sinkage_exponent ? "1" : "deg";
}

std::optional<Parameter> parse_parameter(std::string_view id) noexcept {
  if (id == "N") return Parameter::sinkage_exponent;
  if (id == "phi") return Parameter::friction_angle;
  return std::nullopt;
}

TerrainPropertyModel::TerrainPropertyModel(segmentation::TerrainClassSet classes,
                                           std::vector<ClassProperties> entries)
    : classes_(std::move(classes)), entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != classes_.size()) {
    throw std::invalid_argument("property model needs one entry per class");
  }
  for (const auto& e : entries_) {
    for (const auto* g : {&e.sinkage_exponent, &e.friction_angle}) {
      if (!std::isfinite(g->mu) || !std::isfinite(g->sigma) || g->sigma < 0.0) {
        throw std::invalid_argument("property model entries need finite mu and sigma >= 0");
      }
    }
  }
}

namespace {

// Welford running moments.
class Moments {
 public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  [[nodiscard]] Gaussian mle() const noexcept {
    return {mean_, std::sqrt(std::max(m2_, 0.0) / static_cast<double>(n_))};
  }
  [[nodiscard]] std::size_t count() const noexcept { return n_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace

TerrainPropertyModel fit_property_model(std::span<const LabeledProperties> samples,
                                        const segmentation::TerrainClassSet& classes,
                                        const PartialPropertyModel& defaults) {
  const int k_count = classes.size();
  std::vector<Moments> n_moments(static_cast<std::size_t>(k_count));
  std::vector<Moments> phi_moments(static_cast<std::size_t>(k_count));
  for (const auto& s : samples) {
    if (s.class_index < 0 || s.class_index >= k_count) {
      throw DataError(DataErrc::invalid_value,
                      "sample class index " + std::to_string(s.class_index) + " out of range");
    }
    if (!s.properties.converged) continue;
    n_moments[s.class_index].add(s.properties.sinkage_exponent);
    phi_moments[s.class_index].add(s.properties.friction_angle_deg);
  }

  std::vector<ClassProperties> entries(static_cast<std::size_t>(k_count));
  std::vector<std::string> missing;
  for (int k = 0; k < k_count; ++k) {
    const std::size_t n = n_moments[k].count();
    if (n >= 2) {
      entries[k] = {n_moments[k].mle(), phi_moments[k].mle(), n};
      continue;
    }
    const auto it = defaults.find(classes.name(k));
    if (it != defaults.end()) {
      entries[k] = it->second;
      continue;
    }
    missing.push_back(classes.name(k) + " (" + std::to_string(n) + " samples)");
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError(DataErrc::invalid_value,
                    "classes need >= 2 converged samples or a default: " + list);
  }
  return TerrainPropertyModel(classes, std::move(entries));
}

PartialPropertyModel untraversable_defaults(const segmentation::TerrainClassSet& classes,
                                            const TerrainPropertyModel* fitted,
                                            const UntraversableNames& names) {
  PartialPropertyModel out;
  if (classes.find(names.rock)) {
    ClassProperties rock{{0.10, 0.01}, {47.3, 18.7}, 0};
    if (fitted != nullptr) {
      const ClassProperties* stiffest = nullptr;
      for (int k = 0; k < fitted->size(); ++k) {
        const auto& name = fitted->classes().name(k);
        const auto& e = (*fitted)[k];
        if (name == names.rock || name == names.background || e.samples == 0) continue;
        if (stiffest == nullptr || e.sinkage_exponent.mu < stiffest->sinkage_exponent.mu) {
          stiffest = &e;
        }
      }
      if (stiffest != nullptr) rock = {stiffest->sinkage_exponent, stiffest->friction_angle, 0};
    }
    out.emplace(names.rock, rock);
  }
  if (classes.find(names.background)) {
    out.emplace(names.background, ClassProperties{{0.0, 0.0}, {0.0, 0.0}, 0});
  }
  return out;
}

TerrainPropertyModel reference_property_model() {
  return TerrainPropertyModel(segmentation::TerrainClassSet::planetary_default(),
                              {
                                  {{1.36, 0.25}, {29.6, 8.9}, 0},
                                  {{1.28, 0.32}, {36.9, 8.6}, 0},
                                  {{0.92, 0.27}, {36.5, 12.4}, 0},
                                  {{0.10, 0.01}, {47.3, 18.7}, 0},
                                  {{0.10, 0.01}, {47.3, 18.7}, 0},
                                  {{0.0, 0.0}, {0.0, 0.0}, 0},
                              });
}

std::vector<LabeledProperties> sample_property_model(const TerrainPropertyModel& model,
                                                     std::size_t per_class, std::uint64_t seed,
                                                     bool truncate, const SolverConfig& box) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto normal = [&] {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  auto draw = [&](const Gaussian& g, double lo, double hi) {
    for (;;) {
      const double x = g.mu + g.sigma * normal();
      if (!truncate || (x >= lo && x <= hi)) return x;
    }
  };

  std::vector<LabeledProperties> out;
  for (int k = 0; k < model.size(); ++k) {
    const auto& e = model[k];
    if (!(e.sinkage_exponent.sigma > 0.0) || !(e.friction_angle.sigma > 0.0)) continue;
    for (std::size_t i = 0; i < per_class; ++i) {
      LabeledProperties s;
      s.class_index = k;
      s.properties.sinkage_exponent = draw(e.sinkage_exponent, box.n_min, box.n_max);
      s.properties.friction_angle_deg = draw(e.friction_angle, box.phi_min_deg, box.phi_max_deg);
      s.properties.converged = true;
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace terraprop::terramech
