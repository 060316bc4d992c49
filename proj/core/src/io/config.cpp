#include "terraprop/io/config.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

#include "terraprop/error.hpp"

namespace terraprop::io {

namespace {

// Reads known members of one section, rejecting anything else.
class Section {
 public:
  Section(const Json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw DataError(DataErrc::malformed, "config: '" + name_ + "' must be an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) {
        throw DataError(DataErrc::malformed, "config: unknown field '" + qualified(key) + "'");
      }
    }
  }

  void get(const char* key, double& out) const {
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw DataError(DataErrc::invalid_value,
                      "config: field '" + qualified(key) + "' must be a finite number");
    }
    out = v.get<double>();
  }

  void get(const char* key, int& out) const {
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) {
      throw DataError(DataErrc::invalid_value, "config: field '" + qualified(key) + "' must be an integer");
    }
    out = v.get<int>();
  }

  void get(const char* key, std::uint64_t& out) const {
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_number_unsigned()) {
      throw DataError(DataErrc::invalid_value,
                      "config: field '" + qualified(key) + "' must be a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }

  void get(const char* key, std::string& out) const {
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_string()) {
      throw DataError(DataErrc::invalid_value, "config: field '" + qualified(key) + "' must be a string");
    }
    out = v.get<std::string>();
  }

  [[nodiscard]] std::string qualified(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

 private:
  const Json& j_;
  std::string name_;
};

template <class Fn>
void with_section(const Json& root, const char* name, Fn&& fn) {
  if (root.contains(name)) fn(Section(root.at(name), name));
}

template <class Fn>
void validated(const char* section, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw DataError(DataErrc::invalid_value, std::string("config: '") + section + "': " + e.what());
  }
}

}  // namespace

Json expected_units() { return {{"length", "m"}, {"pressure", "Pa"}, {"angle", "deg"}}; }

PipelineConfig parse_pipeline_config(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw DataError(DataErrc::malformed, "config: document must be a JSON object");
  Section root(j, "");
  root.allow({"units", "paths", "wheel", "soil", "solver", "features", "training",
              "weight_constant", "smoothing_window_s", "hazard", "full_scale", "depth_tolerance",
              "seed"});

  if (!j.contains("units")) throw DataError(DataErrc::malformed, "config: missing field 'units'");
  {
    Section units(j.at("units"), "units");
    units.allow({"length", "pressure", "angle"});
    const Json expected = expected_units();
    for (const auto& [key, want] : expected.items()) {
      std::string got;
      units.get(key.c_str(), got);
      if (got != want.get<std::string>()) {
        throw DataError(DataErrc::invalid_value, "config: field 'units." + key + "' must be '" +
                                                     want.get<std::string>() + "', got '" + got +
                                                     "'");
      }
    }
  }

  PipelineConfig cfg;
  with_section(j, "paths", [&](const Section& s) {
    s.allow({"class_set", "classifier", "property_model", "camera"});
    auto path = [&](const char* key, std::optional<std::filesystem::path>& out) {
      std::string text;
      s.get(key, text);
      if (text.empty()) return;
      std::filesystem::path p(text);
      if (p.is_relative()) p = base_dir / p;
      if (!std::filesystem::exists(p)) {
        throw DataError(DataErrc::io, "config: field '" + s.qualified(key) + "' names missing file '" +
                                          p.string() + "'");
      }
      out = p;
    };
    path("class_set", cfg.paths.class_set);
    path("classifier", cfg.paths.classifier);
    path("property_model", cfg.paths.property_model);
    path("camera", cfg.paths.camera);
  });
  with_section(j, "wheel", [&](const Section& s) {
    s.allow({"radius", "width", "lug_height", "slip_radius"});
    s.get("radius", cfg.wheel.radius);
    s.get("width", cfg.wheel.width);
    s.get("lug_height", cfg.wheel.lug_height);
    s.get("slip_radius", cfg.wheel.slip_radius);
  });
  with_section(j, "soil", [&](const Section& s) {
    s.allow({"k_c", "k_phi", "cohesion", "shear_modulus"});
    s.get("k_c", cfg.soil.k_c);
    s.get("k_phi", cfg.soil.k_phi);
    s.get("cohesion", cfg.soil.cohesion);
    s.get("shear_modulus", cfg.soil.shear_modulus);
  });
  with_section(j, "solver", [&](const Section& s) {
    s.allow({"n_min", "n_max", "phi_min", "phi_max", "tolerance", "max_outer_iterations",
             "quadrature_intervals", "exit_angle", "slip_epsilon"});
    s.get("n_min", cfg.solver.n_min);
    s.get("n_max", cfg.solver.n_max);
    s.get("phi_min", cfg.solver.phi_min_deg);
    s.get("phi_max", cfg.solver.phi_max_deg);
    s.get("tolerance", cfg.solver.tolerance);
    s.get("max_outer_iterations", cfg.solver.max_outer_iterations);
    s.get("quadrature_intervals", cfg.solver.quadrature_intervals);
    // Configured in degrees like every other angle in the file.
    double exit_deg = cfg.solver.exit_angle * 180.0 / M_PI;
    s.get("exit_angle", exit_deg);
    cfg.solver.exit_angle = exit_deg * M_PI / 180.0;
    s.get("slip_epsilon", cfg.solver.slip_epsilon);
  });
  with_section(j, "features", [&](const Section& s) {
    s.allow({"patch_radius"});
    s.get("patch_radius", cfg.features.patch_radius);
  });
  with_section(j, "training", [&](const Section& s) {
    s.allow({"learning_rate", "decay_rate", "decay_epochs", "epochs", "init_scale"});
    s.get("learning_rate", cfg.training.learning_rate);
    s.get("decay_rate", cfg.training.decay_rate);
    s.get("decay_epochs", cfg.training.decay_epochs);
    s.get("epochs", cfg.training.epochs);
    s.get("init_scale", cfg.training.init_scale);
  });
  with_section(j, "hazard", [&](const Section& s) {
    s.allow({"n_max", "phi_min", "sigma_n_max", "sigma_phi_max"});
    s.get("n_max", cfg.hazard.n_max);
    s.get("phi_min", cfg.hazard.phi_min_deg);
    s.get("sigma_n_max", cfg.hazard.sigma_n_max);
    s.get("sigma_phi_max", cfg.hazard.sigma_phi_max);
  });
  with_section(j, "full_scale", [&](const Section& s) {
    s.allow({"N", "phi"});
    s.get("N", cfg.full_scale_n);
    s.get("phi", cfg.full_scale_phi_deg);
  });
  root.get("weight_constant", cfg.weight_constant);
  root.get("smoothing_window_s", cfg.smoothing_window_s);
  root.get("depth_tolerance", cfg.depth_tolerance);
  root.get("seed", cfg.seed);
  cfg.training.seed = cfg.seed;

  validated("wheel", [&] { cfg.wheel.validate(); });
  validated("soil", [&] { cfg.soil.validate(); });
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DataError(DataErrc::invalid_value, std::string("config: ") + what);
  };
  require(cfg.solver.n_min > 0 && cfg.solver.n_min < cfg.solver.n_max, "solver N box must satisfy 0 < n_min < n_max");
  require(cfg.solver.phi_min_deg >= 0 && cfg.solver.phi_min_deg < cfg.solver.phi_max_deg &&
              cfg.solver.phi_max_deg < 90,
          "solver phi box must satisfy 0 <= phi_min < phi_max < 90");
  require(cfg.solver.tolerance > 0, "solver.tolerance must be positive");
  require(cfg.solver.max_outer_iterations > 0, "solver.max_outer_iterations must be positive");
  require(cfg.solver.quadrature_intervals >= 2 && cfg.solver.quadrature_intervals % 2 == 0,
          "solver.quadrature_intervals must be even and >= 2");
  require(cfg.features.patch_radius >= 0, "features.patch_radius must be non-negative");
  require(cfg.training.learning_rate > 0 && cfg.training.decay_rate > 0 &&
              cfg.training.decay_epochs > 0 && cfg.training.epochs >= 0 &&
              cfg.training.init_scale >= 0,
          "training settings out of range");
  require(cfg.weight_constant > 1.0, "weight_constant must exceed 1");
  require(cfg.smoothing_window_s >= 0, "smoothing_window_s must be non-negative");
  require(cfg.full_scale_n > 0 && cfg.full_scale_phi_deg > 0, "full_scale ranges must be positive");
  require(cfg.depth_tolerance > 0, "depth_tolerance must be positive");
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return parse_pipeline_config(read_json_file(path), path.parent_path());
}

Json pipeline_config_to_json(const PipelineConfig& c) {
  Json j;
  j["units"] = expected_units();
  Json paths = Json::object();
  auto put_path = [&](const char* key, const std::optional<std::filesystem::path>& p) {
    if (p) paths[key] = p->string();
  };
  put_path("class_set", c.paths.class_set);
  put_path("classifier", c.paths.classifier);
  put_path("property_model", c.paths.property_model);
  put_path("camera", c.paths.camera);
  j["paths"] = paths;
  j["wheel"] = {{"radius", c.wheel.radius},
                {"width", c.wheel.width},
                {"lug_height", c.wheel.lug_height},
                {"slip_radius", c.wheel.slip_radius}};
  j["soil"] = {{"k_c", c.soil.k_c},
               {"k_phi", c.soil.k_phi},
               {"cohesion", c.soil.cohesion},
               {"shear_modulus", c.soil.shear_modulus}};
  j["solver"] = {{"n_min", c.solver.n_min},
                 {"n_max", c.solver.n_max},
                 {"phi_min", c.solver.phi_min_deg},
                 {"phi_max", c.solver.phi_max_deg},
                 {"tolerance", c.solver.tolerance},
                 {"max_outer_iterations", c.solver.max_outer_iterations},
                 {"quadrature_intervals", c.solver.quadrature_intervals},
                 {"exit_angle", c.solver.exit_angle * 180.0 / M_PI},
                 {"slip_epsilon", c.solver.slip_epsilon}};
  j["features"] = {{"patch_radius", c.features.patch_radius}};
  j["training"] = {{"learning_rate", c.training.learning_rate},
                   {"decay_rate", c.training.decay_rate},
                   {"decay_epochs", c.training.decay_epochs},
                   {"epochs", c.training.epochs},
                   {"init_scale", c.training.init_scale}};
  j["weight_constant"] = c.weight_constant;
  j["smoothing_window_s"] = c.smoothing_window_s;
  Json hazard = Json::object();
  auto put_finite = [&](const char* key, double v) {
    if (std::isfinite(v)) hazard[key] = v;
  };
  put_finite("n_max", c.hazard.n_max);
  put_finite("phi_min", c.hazard.phi_min_deg);
  put_finite("sigma_n_max", c.hazard.sigma_n_max);
  put_finite("sigma_phi_max", c.hazard.sigma_phi_max);
  j["hazard"] = hazard;
  j["full_scale"] = {{"N", c.full_scale_n}, {"phi", c.full_scale_phi_deg}};
  j["depth_tolerance"] = c.depth_tolerance;
  j["seed"] = c.seed;
  return j;
}

}  // namespace terraprop::io
