#include "terraprop/terramech/interaction_log.hpp"

#include "terraprop/error.hpp"
#include "terraprop/parallel.hpp"

namespace terraprop::terramech {

std::vector<InteractionSample> smooth_log(std::span<const InteractionSample> samples,
                                          double window_seconds) {
  std::vector<InteractionSample> out(samples.begin(), samples.end());
  if (!(window_seconds > 0.0)) return out;
  const double half = 0.5 * window_seconds;
  std::size_t run_begin = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && samples[i].label != samples[i - 1].label) run_begin = i;
    std::size_t run_end = i + 1;
    while (run_end < samples.size() && samples[run_end].label == samples[i].label) ++run_end;

    double f = 0, m = 0, w = 0, v = 0, z = 0;
    std::size_t n = 0;
    for (std::size_t j = run_begin; j < run_end; ++j) {
      if (std::abs(samples[j].t - samples[i].t) > half) continue;
      f += samples[j].normal_force;
      m += samples[j].torque;
      w += samples[j].omega;
      v += samples[j].v;
      z += samples[j].sinkage;
      ++n;
    }
    const double inv = 1.0 / static_cast<double>(n);
    out[i].normal_force = f * inv;
    out[i].torque = m * inv;
    out[i].omega = w * inv;
    out[i].v = v * inv;
    out[i].sinkage = z * inv;
  }
  return out;
}

IdentificationReport identify_log(std::span<const InteractionSample> samples,
                                  const WheelGeometry& wheel, const SoilParams& soil,
                                  const SolverConfig& config, int threads) {
  wheel.validate();
  soil.validate();
  IdentificationReport report;
  report.records.resize(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& rec = report.records[i];
      rec.sample = samples[i];
      try {
        rec.result = identify_dominant(samples[i], wheel, soil, config);
        rec.accepted = true;
      } catch (const DataError& e) {
        rec.rejection = e.what();
      }
    }
  });
  for (const auto& rec : report.records) {
    if (rec.accepted) {
      ++report.accepted;
      if (rec.result.converged) ++report.converged;
    } else {
      ++report.rejected;
    }
  }
  return report;
}

std::vector<LabeledProperties> labeled_properties(std::span<const IdentificationRecord> records,
                                                  const segmentation::TerrainClassSet& classes) {
  std::vector<LabeledProperties> out;
  for (const auto& rec : records) {
    if (!rec.accepted || rec.sample.label.empty()) continue;
    const auto k = classes.find(rec.sample.label);
    if (!k) {
      throw DataError(DataErrc::invalid_value,
                      "label '" + rec.sample.label + "' is not in the class set");
    }
    out.push_back({*k, rec.result});
  }
  return out;
}

}  // namespace terraprop::terramech
