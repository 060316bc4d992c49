#include "terraprop/io/json_codecs.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include "terraprop/error.hpp"
#include "terraprop/io/ppm.hpp"

namespace terraprop::io {

using segmentation::Rgb;
using segmentation::TerrainClassSet;

namespace {

const Json& member(const Json& j, const std::string& key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw DataError(DataErrc::malformed, context + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const std::string& key, const std::string& context) {
  const auto& v = member(j, key, context);
  if (!v.is_number()) {
    throw DataError(DataErrc::malformed, context + ": field '" + key + "' must be a number");
  }
  return v.get<double>();
}

int integer(const Json& j, const std::string& key, const std::string& context) {
  const auto& v = member(j, key, context);
  if (!v.is_number_integer()) {
    throw DataError(DataErrc::malformed, context + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

// Colours for names not in the planetary palette: a fixed grey ramp.
std::vector<Rgb> colors_for(const std::vector<std::string>& names) {
  const auto reference = TerrainClassSet::planetary_default();
  std::vector<Rgb> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (auto k = reference.find(names[i])) {
      out.push_back(reference.color(*k));
    } else {
      const auto g = static_cast<std::uint8_t>(40 + (i * 37) % 200);
      out.push_back({g, g, g});
    }
  }
  return out;
}

template <class Fn>
auto as_data_error(const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw DataError(DataErrc::invalid_value, context + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(DataErrc::malformed, context + ": " + e.what());
  }
}

}  // namespace

Json class_set_to_json(const TerrainClassSet& classes) {
  Json list = Json::array();
  for (int k = 0; k < classes.size(); ++k) {
    const auto& c = classes.color(k);
    list.push_back({{"name", classes.name(k)}, {"color", {c[0], c[1], c[2]}}});
  }
  return {{"classes", list}};
}

TerrainClassSet class_set_from_json(const Json& j) {
  return as_data_error("class set", [&] {
    const auto& list = member(j, "classes", "class set");
    std::vector<std::string> names;
    std::vector<Rgb> colors;
    for (const auto& e : list) {
      if (e.is_string()) {
        names.push_back(e.get<std::string>());
        continue;
      }
      names.push_back(member(e, "name", "class set entry").get<std::string>());
      const auto& c = member(e, "color", "class set entry '" + names.back() + "'");
      if (!c.is_array() || c.size() != 3) {
        throw DataError(DataErrc::malformed, "class colour must be [r, g, b]");
      }
      colors.push_back({c[0].get<std::uint8_t>(), c[1].get<std::uint8_t>(),
                        c[2].get<std::uint8_t>()});
    }
    if (colors.empty()) colors = colors_for(names);
    return TerrainClassSet(std::move(names), std::move(colors));
  });
}

Json classifier_to_json(const segmentation::PixelClassifier& classifier) {
  Json weights = Json::array();
  const int nf = classifier.num_features();
  for (int k = 0; k < classifier.num_classes(); ++k) {
    Json row = Json::array();
    for (int f = 0; f <= nf; ++f) row.push_back(classifier.weight(k, f));
    weights.push_back(row);
  }
  Json j;
  j["format"] = "terraprop.classifier/1";
  j["classes"] = class_set_to_json(classifier.classes())["classes"];
  j["feature_config"] = {{"patch_radius", classifier.feature_config().patch_radius},
                         {"feature_count", nf}};
  j["weights"] = weights;
  return j;
}

segmentation::PixelClassifier classifier_from_json(const Json& j) {
  return as_data_error("classifier", [&] {
    auto classes = class_set_from_json(j);
    const auto& fc = member(j, "feature_config", "classifier");
    segmentation::FeatureConfig config{integer(fc, "patch_radius", "feature_config")};
    if (fc.contains("feature_count") && fc["feature_count"].get<int>() != config.feature_count()) {
      throw DataError(DataErrc::shape_mismatch,
                      "classifier feature_count does not match the feature extractor");
    }
    const auto& rows = member(j, "weights", "classifier");
    if (!rows.is_array() || static_cast<int>(rows.size()) != classes.size()) {
      throw DataError(DataErrc::shape_mismatch, "classifier weights must have one row per class");
    }
    std::vector<double> w;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != config.feature_count() + 1) {
        throw DataError(DataErrc::shape_mismatch, "classifier weight rows must have F + 1 entries");
      }
      for (const auto& v : row) w.push_back(v.get<double>());
    }
    return segmentation::PixelClassifier(std::move(classes), config, std::move(w));
  });
}

Json property_model_to_json(const terramech::TerrainPropertyModel& model) {
  Json j = Json::object();
  for (int k = 0; k < model.size(); ++k) {
    const auto& e = model[k];
    j[model.classes().name(k)] = {
        {"N", {{"mu", e.sinkage_exponent.mu}, {"sigma", e.sinkage_exponent.sigma}, {"n", e.samples}}},
        {"phi", {{"mu", e.friction_angle.mu}, {"sigma", e.friction_angle.sigma}, {"n", e.samples}}},
    };
  }
  return j;
}

terramech::TerrainPropertyModel property_model_from_json(
    const Json& j, const std::optional<TerrainClassSet>& classes) {
  return as_data_error("property model", [&] {
    if (!j.is_object() || j.empty()) {
      throw DataError(DataErrc::malformed, "property model must be a non-empty object");
    }
    std::vector<std::string> names;
    std::vector<terramech::ClassProperties> entries;
    for (const auto& [name, entry] : j.items()) {
      const std::string ctx = "property model class '" + name + "'";
      const auto& n = member(entry, "N", ctx);
      const auto& phi = member(entry, "phi", ctx);
      terramech::ClassProperties p;
      p.sinkage_exponent = {number(n, "mu", ctx + " N"), number(n, "sigma", ctx + " N")};
      p.friction_angle = {number(phi, "mu", ctx + " phi"), number(phi, "sigma", ctx + " phi")};
      p.samples = n.contains("n") ? n["n"].get<std::size_t>() : 0;
      names.push_back(name);
      entries.push_back(p);
    }
    if (classes) {
      if (classes->names() != names) {
        throw DataError(DataErrc::shape_mismatch,
                        "property model classes differ from the configured class set");
      }
      return terramech::TerrainPropertyModel(*classes, std::move(entries));
    }
    auto colors = colors_for(names);
    return terramech::TerrainPropertyModel(TerrainClassSet(std::move(names), std::move(colors)),
                                           std::move(entries));
  });
}

std::string model_hash(const terramech::TerrainPropertyModel& model) {
  const auto text = property_model_to_json(model).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json camera_to_json(const labeling::CameraModel& cam) {
  return {{"fx", cam.fx}, {"fy", cam.fy},         {"cx", cam.cx},
          {"cy", cam.cy}, {"width", cam.width}, {"height", cam.height}};
}

labeling::CameraModel camera_from_json(const Json& j) {
  return as_data_error("camera", [&] {
    labeling::CameraModel cam{number(j, "fx", "camera"), number(j, "fy", "camera"),
                              number(j, "cx", "camera"), number(j, "cy", "camera"),
                              integer(j, "width", "camera"), integer(j, "height", "camera")};
    cam.validate();
    return cam;
  });
}

std::map<std::string, labeling::Pose> poses_from_csv(const CsvTable& table) {
  const auto frame = table.column("frame");
  const std::size_t cols[7] = {table.column("qw"), table.column("qx"), table.column("qy"),
                               table.column("qz"), table.column("tx"), table.column("ty"),
                               table.column("tz")};
  std::map<std::string, labeling::Pose> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    double v[7];
    for (int i = 0; i < 7; ++i) v[i] = table.number(r, cols[i]);
    const std::string ctx =
        "'" + table.source() + "' frame '" + table.text(r, frame) + "'";
    out.insert_or_assign(table.text(r, frame), as_data_error(ctx, [&] {
                           return labeling::Pose::from_quaternion(v[0], v[1], v[2], v[3],
                                                                  {v[4], v[5], v[6]});
                         }));
  }
  return out;
}

std::string poses_to_csv(const std::vector<std::pair<std::string, labeling::Pose>>& poses) {
  CsvWriter w({"frame", "qw", "qx", "qy", "qz", "tx", "ty", "tz"});
  for (const auto& [name, pose] : poses) {
    const Eigen::Quaterniond q(pose.rotation());
    w.field(name).field(q.w()).field(q.x()).field(q.y()).field(q.z());
    w.field(pose.translation().x()).field(pose.translation().y()).field(pose.translation().z());
    w.end_row();
  }
  return w.str();
}

std::vector<terramech::InteractionSample> interaction_log_from_csv(const CsvTable& table) {
  const auto t = table.column("t");
  const auto fn = table.column("F_N");
  const auto mr = table.column("M_R");
  const auto om = table.column("omega");
  const auto v = table.column("v");
  const auto z = table.column("z");
  const auto label = table.column("label");
  std::vector<terramech::InteractionSample> out;
  out.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    out.push_back({table.number(r, t), table.number(r, fn), table.number(r, mr),
                   table.number(r, om), table.number(r, v), table.number(r, z),
                   table.text(r, label)});
  }
  return out;
}

std::string interaction_log_to_csv(std::span<const terramech::InteractionSample> samples) {
  CsvWriter w({"t", "F_N", "M_R", "omega", "v", "z", "label"});
  for (const auto& s : samples) {
    w.field(s.t).field(s.normal_force).field(s.torque).field(s.omega).field(s.v).field(s.sinkage);
    w.field(s.label).end_row();
  }
  return w.str();
}

std::string identification_report_to_csv(const terramech::IdentificationReport& report) {
  CsvWriter w({"t", "label", "F_N", "M_R", "omega", "v", "z", "status", "N", "phi", "s",
               "theta1", "converged", "iterations", "res_F_N", "res_M_R", "slip_clamped",
               "reason"});
  for (const auto& rec : report.records) {
    const auto& s = rec.sample;
    w.field(s.t).field(s.label).field(s.normal_force).field(s.torque).field(s.omega).field(s.v);
    w.field(s.sinkage);
    if (rec.accepted) {
      const auto& p = rec.result;
      w.field("accepted").field(p.sinkage_exponent).field(p.friction_angle_deg).field(p.slip);
      w.field(p.theta1).field(p.converged ? 1 : 0).field(p.iterations);
      w.field(p.residual_normal_force).field(p.residual_torque).field(p.slip_clamped ? 1 : 0);
      w.field(p.diagnostic);
    } else {
      w.field("rejected");
      for (int i = 0; i < 9; ++i) w.empty_field();
      w.field(rec.rejection);
    }
    w.end_row();
  }
  return w.str();
}

std::vector<terramech::IdentificationRecord> identification_report_from_csv(const CsvTable& table) {
  const auto label = table.column("label");
  const auto status = table.column("status");
  const auto n = table.column("N");
  const auto phi = table.column("phi");
  const auto converged = table.column("converged");
  const auto t = table.find_column("t");
  const auto s = table.find_column("s");
  const auto theta1 = table.find_column("theta1");
  const auto reason = table.find_column("reason");
  std::vector<terramech::IdentificationRecord> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    terramech::IdentificationRecord rec;
    rec.sample.label = table.text(r, label);
    if (t) rec.sample.t = table.number(r, *t);
    const auto& st = table.text(r, status);
    if (st == "accepted") {
      rec.accepted = true;
      rec.result.sinkage_exponent = table.number(r, n);
      rec.result.friction_angle_deg = table.number(r, phi);
      rec.result.converged = table.integer(r, converged) != 0;
      if (s) rec.result.slip = table.number(r, *s);
      if (theta1) rec.result.theta1 = table.number(r, *theta1);
    } else if (st == "rejected") {
      if (reason) rec.rejection = table.text(r, *reason);
    } else {
      throw DataError(DataErrc::malformed, "'" + table.source() + "' line " +
                                               std::to_string(r + 2) +
                                               " column 'status': expected accepted/rejected");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

RouteInput route_from_csv(const CsvTable& table) {
  const auto wheel = table.column("wheel");
  const auto row = table.column("row");
  const auto col = table.column("col");
  const auto arc = table.find_column("arclength");
  const auto tn = table.find_column("truth_N");
  const auto tphi = table.find_column("truth_phi");
  if (tn.has_value() != tphi.has_value()) {
    throw DataError(DataErrc::missing_column, "'" + table.source() + "' has no column '" +
                                                  (tn ? "truth_phi" : "truth_N") + "'");
  }
  RouteInput in;
  std::map<long long, std::size_t> slot;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const long long id = table.integer(r, wheel);
    auto [it, fresh] = slot.try_emplace(id, in.route.wheels.size());
    if (fresh) {
      in.route.wheels.push_back({static_cast<int>(id), {}});
      in.truth.emplace_back();
    }
    inference::RoutePoint pt{table.number(r, row), table.number(r, col), std::nullopt};
    if (arc && !table.text(r, *arc).empty()) pt.arclength = table.number(r, *arc);
    in.route.wheels[it->second].points.push_back(pt);
    std::optional<std::pair<double, double>> truth;
    if (tn && !table.text(r, *tn).empty()) {
      truth = std::make_pair(table.number(r, *tn), table.number(r, *tphi));
    }
    in.truth[it->second].push_back(truth);
  }
  return in;
}

void attach_truth(inference::RoutePrediction& prediction, const RouteInput& input) {
  for (std::size_t w = 0; w < prediction.wheels.size() && w < input.truth.size(); ++w) {
    auto& pts = prediction.wheels[w].points;
    for (std::size_t i = 0; i < pts.size() && i < input.truth[w].size(); ++i) {
      if (const auto& t = input.truth[w][i]) {
        pts[i].truth_n = t->first;
        pts[i].truth_phi = t->second;
      }
    }
  }
}

std::string route_prediction_to_csv(const inference::RoutePrediction& prediction) {
  CsvWriter w({"wheel", "index", "row", "col", "mu_N", "sigma_N", "mu_phi", "sigma_phi",
               "truth_N", "truth_phi"});
  for (const auto& wheel : prediction.wheels) {
    for (std::size_t i = 0; i < wheel.points.size(); ++i) {
      const auto& p = wheel.points[i];
      w.field(wheel.wheel).field(i).field(p.point.row).field(p.point.col);
      w.field(p.mu_n).field(p.sigma_n).field(p.mu_phi).field(p.sigma_phi);
      if (p.truth_n) w.field(*p.truth_n); else w.empty_field();
      if (p.truth_phi) w.field(*p.truth_phi); else w.empty_field();
      w.end_row();
    }
  }
  return w.str();
}

std::string metrics_to_csv(const segmentation::SegmentationMetrics& m,
                           const TerrainClassSet& classes) {
  CsvWriter w({"metric", "class", "value"});
  for (int k = 0; k < classes.size(); ++k) {
    w.field("iou").field(classes.name(k));
    if (m.iou[k]) w.field(*m.iou[k]); else w.empty_field();
    w.end_row();
  }
  for (int k = 0; k < classes.size(); ++k) {
    w.field("recall").field(classes.name(k));
    if (m.recall[k]) w.field(*m.recall[k]); else w.empty_field();
    w.end_row();
  }
  w.field("mean_iou").empty_field().field(m.mean_iou).end_row();
  w.field("pixel_accuracy").empty_field().field(m.pixel_accuracy).end_row();
  return w.str();
}

std::string metrics_table(const segmentation::SegmentationMetrics& m,
                          const segmentation::ConfusionMatrix& cm,
                          const TerrainClassSet& classes) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "class" << std::right << std::setw(10) << "IoU"
      << std::setw(10) << "recall" << std::setw(12) << "pixels" << '\n';
  out << std::string(46, '-') << '\n';
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << 100.0 * *v << '%';
    return s.str();
  };
  for (int k = 0; k < classes.size(); ++k) {
    out << std::left << std::setw(14) << classes.name(k) << std::right << std::setw(10)
        << pct(m.iou[k]) << std::setw(10) << pct(m.recall[k]) << std::setw(12) << cm.row_sum(k)
        << '\n';
  }
  out << std::string(46, '-') << '\n';
  out << std::left << std::setw(14) << "mIoU" << std::right << std::setw(10) << pct(m.mean_iou)
      << '\n';
  out << std::left << std::setw(14) << "pixel acc." << std::right << std::setw(10)
      << pct(m.pixel_accuracy) << '\n';
  return out.str();
}

std::string confusion_to_csv(const segmentation::ConfusionMatrix& cm,
                             const TerrainClassSet& classes) {
  std::vector<std::string> header{"truth\\pred"};
  for (const auto& n : classes.names()) header.push_back(n);
  CsvWriter w(header);
  for (int i = 0; i < cm.size(); ++i) {
    w.field(classes.name(i));
    for (int j = 0; j < cm.size(); ++j) w.field(static_cast<long long>(cm(i, j)));
    w.end_row();
  }
  return w.str();
}

std::string ratio_results_to_csv(std::span<const segmentation::RatioResult> rows) {
  CsvWriter w({"ratio", "full_images", "pixel_accuracy", "mean_iou"});
  for (const auto& r : rows) {
    w.field(r.ratio).field(r.full_images).field(r.pixel_accuracy).field(r.mean_iou).end_row();
  }
  return w.str();
}

void write_corpus(const std::filesystem::path& dir, const segmentation::SyntheticCorpus& corpus) {
  AtomicWriter writer;
  Json manifest;
  manifest["classes"] = class_set_to_json(corpus.classes)["classes"];
  auto emit = [&](const std::vector<segmentation::SyntheticSample>& split, const char* name) {
    Json list = Json::array();
    for (std::size_t i = 0; i < split.size(); ++i) {
      char stem[64];
      std::snprintf(stem, sizeof(stem), "%s_%03zu", name, i);
      const std::string image = std::string(stem) + ".ppm";
      const std::string full = std::string(stem) + "_full.u8";
      const std::string partial = std::string(stem) + "_partial.u8";
      writer.add(dir / image, encode_ppm(split[i].image));
      write_label_raster(writer, dir / full, split[i].full_labels);
      write_label_raster(writer, dir / partial, split[i].partial_labels);
      list.push_back({{"image", image}, {"full", full}, {"partial", partial}});
    }
    manifest[name] = list;
  };
  emit(corpus.train, "train");
  emit(corpus.test, "test");
  writer.add(dir / "manifest.json", manifest.dump(2) + "\n");
  writer.commit();
}

segmentation::SyntheticCorpus read_corpus(const std::filesystem::path& manifest_path) {
  const auto manifest = read_json_file(manifest_path);
  const auto dir = manifest_path.parent_path();
  segmentation::SyntheticCorpus corpus{class_set_from_json(manifest), {}, {}};
  auto load = [&](const char* name, std::vector<segmentation::SyntheticSample>& split) {
    const auto& list = member(manifest, name, "corpus manifest");
    for (const auto& e : list) {
      segmentation::SyntheticSample s;
      s.image = read_ppm(dir / member(e, "image", "corpus entry").get<std::string>());
      s.full_labels = read_label_raster(dir / member(e, "full", "corpus entry").get<std::string>());
      s.partial_labels =
          read_label_raster(dir / member(e, "partial", "corpus entry").get<std::string>());
      if (!s.image.same_shape(s.full_labels) || !s.image.same_shape(s.partial_labels)) {
        throw DataError(DataErrc::shape_mismatch, "corpus entry " +
                                                      e["image"].get<std::string>() +
                                                      ": image and labels differ in shape");
      }
      split.push_back(std::move(s));
    }
  };
  load("train", corpus.train);
  load("test", corpus.test);
  return corpus;
}

}  // namespace terraprop::io
