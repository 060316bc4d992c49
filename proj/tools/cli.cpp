#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "terraprop/error.hpp"
#include "terraprop/inference/hazard.hpp"
#include "terraprop/inference/property_map.hpp"
#include "terraprop/inference/route.hpp"
#include "terraprop/io/config.hpp"
#include "terraprop/io/csv.hpp"
#include "terraprop/io/json_codecs.hpp"
#include "terraprop/io/ppm.hpp"
#include "terraprop/io/render.hpp"
#include "terraprop/io/tensor_io.hpp"
#include "terraprop/labeling/propagate.hpp"
#include "terraprop/segmentation/classifier.hpp"
#include "terraprop/segmentation/metrics.hpp"
#include "terraprop/segmentation/ratio_experiment.hpp"
#include "terraprop/segmentation/synthetic.hpp"
#include "terraprop/terramech/interaction_log.hpp"
#include "terraprop/terramech/property_model.hpp"

namespace terraprop::cli {

namespace fs = std::filesystem;
using io::Json;
using segmentation::TerrainClassSet;
using terramech::Parameter;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string config_path;
};

// Everything a subcommand needs besides its own options.
struct Context {
  io::PipelineConfig config;
  std::uint64_t seed = 0;
  int threads = 1;
  std::ostream& out;
};

TerrainClassSet resolve_classes(const Context& ctx, const std::string& flag) {
  if (!flag.empty()) return io::class_set_from_json(io::read_json_file(flag));
  if (ctx.config.paths.class_set) {
    return io::class_set_from_json(io::read_json_file(*ctx.config.paths.class_set));
  }
  return TerrainClassSet::planetary_default();
}

std::string resolve_path(const std::string& flag, const std::optional<fs::path>& configured,
                         const char* what) {
  if (!flag.empty()) return flag;
  if (configured) return configured->string();
  throw CLI::RequiredError(std::string("--") + what);
}

segmentation::MiouMode parse_miou_mode(const std::string& mode) {
  return mode == "all" ? segmentation::MiouMode::all_classes
                       : segmentation::MiouMode::present_classes;
}

Json class_names(const TerrainClassSet& classes) {
  Json names = Json::array();
  for (const auto& n : classes.names()) names.push_back(n);
  return names;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void summary(const Context& ctx, Json j) { ctx.out << j.dump() << '\n'; }

// ---------------------------------------------------------------- weights

struct WeightsOptions {
  std::vector<std::string> labels;
  std::string classes;
  std::optional<double> constant;
  std::string out;
};

void run_weights(const Context& ctx, const WeightsOptions& o) {
  const auto classes = resolve_classes(ctx, o.classes);
  std::vector<LabelImage> rasters;
  for (const auto& path : o.labels) rasters.push_back(io::read_label_raster(path));
  const auto proportions = segmentation::label_proportions(rasters, classes.size());
  const double c = o.constant.value_or(ctx.config.weight_constant);
  const auto weights = segmentation::compute_class_weights(proportions, c);

  Json doc;
  doc["classes"] = class_names(classes);
  doc["constant"] = c;
  doc["proportions"] = proportions;
  doc["weights"] = weights.values();
  io::write_file_atomic(o.out, doc.dump(2) + "\n");
  summary(ctx, {{"command", "weights"}, {"images", rasters.size()}, {"weights", weights.values()}});
}

// ---------------------------------------------------------------- synth-corpus

struct SynthCorpusOptions {
  std::string out;
  int train = 20;
  int test = 10;
  int size = 128;
};

void run_synth_corpus(const Context& ctx, const SynthCorpusOptions& o) {
  segmentation::SyntheticCorpusConfig cfg;
  cfg.train_images = o.train;
  cfg.test_images = o.test;
  cfg.width = cfg.height = o.size;
  cfg.seed = ctx.seed;
  const auto corpus = segmentation::generate_synthetic_corpus(cfg);
  fs::create_directories(o.out);
  io::write_corpus(o.out, corpus);
  summary(ctx, {{"command", "synth-corpus"},
                {"manifest", (fs::path(o.out) / "manifest.json").string()},
                {"train", corpus.train.size()},
                {"test", corpus.test.size()},
                {"seed", ctx.seed}});
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  std::string corpus;
  std::string supervision = "full";
  std::vector<std::string> images;
  std::vector<std::string> labels;
  std::string classes;
  std::optional<int> epochs;
  std::optional<double> learning_rate;
  bool uniform_weights = false;
  std::string out;
  std::string history;
};

void run_train(const Context& ctx, const TrainOptions& o) {
  std::vector<RgbImage> images;
  std::vector<LabelImage> labels;
  std::optional<TerrainClassSet> classes;
  if (!o.corpus.empty()) {
    auto corpus = io::read_corpus(o.corpus);
    for (auto& s : corpus.train) {
      images.push_back(std::move(s.image));
      labels.push_back(std::move(o.supervision == "partial" ? s.partial_labels : s.full_labels));
    }
    classes = corpus.classes;
  } else {
    if (o.images.empty() || o.images.size() != o.labels.size()) {
      throw CLI::ValidationError("train", "give --corpus, or matching --image and --labels lists");
    }
    for (std::size_t i = 0; i < o.images.size(); ++i) {
      images.push_back(io::read_ppm(o.images[i]));
      labels.push_back(io::read_label_raster(o.labels[i]));
      if (!images.back().same_shape(labels.back())) {
        throw DataError(DataErrc::shape_mismatch,
                        "'" + o.labels[i] + "' does not match the size of '" + o.images[i] + "'");
      }
    }
    classes = resolve_classes(ctx, o.classes);
  }

  auto hyper = ctx.config.training;
  hyper.seed = ctx.seed;
  if (o.epochs) hyper.epochs = *o.epochs;
  if (o.learning_rate) hyper.learning_rate = *o.learning_rate;

  std::vector<segmentation::FeatureMap> features;
  for (const auto& img : images) {
    features.push_back(segmentation::extract_features(img, ctx.config.features, ctx.threads));
  }
  const auto weights =
      o.uniform_weights
          ? segmentation::ClassWeights::uniform(classes->size())
          : segmentation::compute_class_weights(
                segmentation::label_proportions(labels, classes->size()), ctx.config.weight_constant);
  const auto result = segmentation::train_classifier(features, labels, weights, *classes,
                                                     ctx.config.features, hyper, ctx.threads);

  io::AtomicWriter writer;
  writer.add(o.out, io::classifier_to_json(result.classifier).dump(2) + "\n");
  if (!o.history.empty()) {
    io::CsvWriter csv({"epoch", "loss"});
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
      csv.field(e).field(result.loss_history[e]).end_row();
    }
    writer.add(o.history, csv.str());
  }
  writer.commit();
  summary(ctx, {{"command", "train"},
                {"images", images.size()},
                {"epochs", hyper.epochs},
                {"initial_loss", result.loss_history.front()},
                {"final_loss", result.final_loss},
                {"class_weights", weights.values()},
                {"single_class", result.single_class}});
}

// ---------------------------------------------------------------- predict

struct PredictOptions {
  std::string classifier;
  std::string image;
  std::string out;
  std::string labels_out;
};

void run_predict(const Context& ctx, const PredictOptions& o) {
  const auto clf = io::classifier_from_json(
      io::read_json_file(resolve_path(o.classifier, ctx.config.paths.classifier, "classifier")));
  const auto image = io::read_ppm(o.image);
  const auto probs = segmentation::predict_probabilities(
      clf, segmentation::extract_features(image, clf.feature_config(), ctx.threads), ctx.threads);

  io::AtomicWriter writer;
  io::write_tensor(writer, o.out, probs, {{"classes", class_names(clf.classes())}});
  if (!o.labels_out.empty()) {
    io::write_label_raster(writer, o.labels_out, segmentation::argmax_labels(probs));
  }
  writer.commit();
  summary(ctx, {{"command", "predict"},
                {"height", probs.height()},
                {"width", probs.width()},
                {"classes", probs.channels()}});
}

// ---------------------------------------------------------------- metrics

struct MetricsOptions {
  std::vector<std::string> pred;
  std::vector<std::string> truth;
  std::string classes;
  std::string miou_mode = "present";
  std::string out;
  std::string confusion;
};

LabelImage read_prediction(const std::string& path) {
  const auto sidecar = io::read_json_file(io::sidecar_path(path));
  if (sidecar.contains("dtype") && sidecar["dtype"] == "float32") {
    return segmentation::argmax_labels(io::read_float_tensor(path).data);
  }
  return io::read_label_raster(path);
}

void run_metrics(const Context& ctx, const MetricsOptions& o) {
  if (o.pred.size() != o.truth.size()) {
    throw CLI::ValidationError("metrics", "--pred and --truth need the same number of files");
  }
  const auto classes = resolve_classes(ctx, o.classes);
  segmentation::ConfusionMatrix cm(classes.size());
  for (std::size_t i = 0; i < o.pred.size(); ++i) {
    const auto pred = read_prediction(o.pred[i]);
    const auto truth = io::read_label_raster(o.truth[i]);
    try {
      cm += segmentation::confusion(pred, truth, classes.size());
    } catch (const DataError& e) {
      throw DataError(e.code(), "'" + o.pred[i] + "' vs '" + o.truth[i] + "': " + e.what());
    }
  }
  const auto m = segmentation::metrics(cm, parse_miou_mode(o.miou_mode));

  io::AtomicWriter writer;
  if (!o.out.empty()) writer.add(o.out, io::metrics_to_csv(m, classes));
  if (!o.confusion.empty()) writer.add(o.confusion, io::confusion_to_csv(cm, classes));
  writer.commit();
  ctx.out << io::metrics_table(m, cm, classes);
  summary(ctx, {{"command", "metrics"},
                {"scored_pixels", cm.total()},
                {"pixel_accuracy", m.pixel_accuracy},
                {"mean_iou", m.mean_iou},
                {"miou_mode", o.miou_mode}});
}

// ---------------------------------------------------------------- ratio-exp

struct RatioOptions {
  std::string corpus;
  std::vector<double> ratios{0.0, 0.1, 0.2, 1.0};
  std::string miou_mode = "present";
  std::optional<int> epochs;
  std::string out;
};

void run_ratio_exp(const Context& ctx, const RatioOptions& o) {
  const auto corpus = io::read_corpus(o.corpus);
  segmentation::RatioExperimentConfig cfg;
  cfg.features = ctx.config.features;
  cfg.training = ctx.config.training;
  if (o.epochs) cfg.training.epochs = *o.epochs;
  cfg.weight_constant = ctx.config.weight_constant;
  cfg.miou_mode = parse_miou_mode(o.miou_mode);
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  const auto rows = segmentation::annotation_ratio_experiment(corpus, o.ratios, cfg);
  io::write_file_atomic(o.out, io::ratio_results_to_csv(rows));
  Json results = Json::array();
  for (const auto& r : rows) {
    results.push_back({{"ratio", r.ratio},
                       {"full_images", r.full_images},
                       {"pixel_accuracy", r.pixel_accuracy},
                       {"mean_iou", r.mean_iou}});
  }
  summary(ctx, {{"command", "ratio-exp"}, {"results", results}});
}

// ---------------------------------------------------------------- identify

struct IdentifyOptions {
  std::string log;
  std::optional<double> window;
  std::string out;
};

void run_identify(const Context& ctx, const IdentifyOptions& o) {
  const auto raw = io::interaction_log_from_csv(io::read_csv(o.log));
  const double window = o.window.value_or(ctx.config.smoothing_window_s);
  const auto smoothed = terramech::smooth_log(raw, window);
  const auto report = terramech::identify_log(smoothed, ctx.config.wheel, ctx.config.soil,
                                              ctx.config.solver, ctx.threads);
  io::write_file_atomic(o.out, io::identification_report_to_csv(report));
  summary(ctx, {{"command", "identify"},
                {"samples", report.records.size()},
                {"accepted", report.accepted},
                {"rejected", report.rejected},
                {"converged", report.converged},
                {"smoothing_window_s", window}});
}

// ---------------------------------------------------------------- synth-report

struct SynthReportOptions {
  std::size_t per_class = 1000;
  bool truncate = false;
  std::string out;
};

void run_synth_report(const Context& ctx, const SynthReportOptions& o) {
  const auto reference = terramech::reference_property_model();
  const auto draws = terramech::sample_property_model(reference, o.per_class, ctx.seed, o.truncate,
                                                      ctx.config.solver);
  terramech::IdentificationReport report;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    terramech::IdentificationRecord rec;
    rec.sample.t = static_cast<double>(i);
    rec.sample.label = reference.classes().name(draws[i].class_index);
    rec.accepted = true;
    rec.result = draws[i].properties;
    report.records.push_back(std::move(rec));
  }
  report.accepted = report.converged = report.records.size();
  io::write_file_atomic(o.out, io::identification_report_to_csv(report));
  summary(ctx, {{"command", "synth-report"}, {"samples", draws.size()}, {"seed", ctx.seed}});
}

// ---------------------------------------------------------------- fit

struct FitOptions {
  std::vector<std::string> reports;
  std::string classes;
  std::string out;
};

void run_fit(const Context& ctx, const FitOptions& o) {
  const auto classes = resolve_classes(ctx, o.classes);
  std::vector<terramech::IdentificationRecord> records;
  for (const auto& path : o.reports) {
    auto part = io::identification_report_from_csv(io::read_csv(path));
    records.insert(records.end(), part.begin(), part.end());
  }
  const auto samples = terramech::labeled_properties(records, classes);
  // First pass with reference fallbacks, then rock mirrors the stiffest fitted class.
  const auto first =
      terramech::fit_property_model(samples, classes, terramech::untraversable_defaults(classes));
  const auto model = terramech::fit_property_model(
      samples, classes, terramech::untraversable_defaults(classes, &first));
  const auto doc = io::property_model_to_json(model);
  io::write_file_atomic(o.out, doc.dump(2) + "\n");
  summary(ctx, {{"command", "fit"},
                {"samples", samples.size()},
                {"model_hash", io::model_hash(model)},
                {"model", doc}});
}

// ---------------------------------------------------------------- infer

struct InferOptions {
  std::string probs;
  std::string model;
  std::string out_prefix;
};

fs::path map_path(const std::string& prefix, Parameter p) {
  return prefix + std::string(terramech::parameter_id(p)) + ".f32";
}

terramech::TerrainPropertyModel load_model(const Context& ctx, const std::string& flag) {
  return io::property_model_from_json(
      io::read_json_file(resolve_path(flag, ctx.config.paths.property_model, "model")));
}

void run_infer(const Context& ctx, const InferOptions& o) {
  const auto model = load_model(ctx, o.model);
  auto tensor = io::read_float_tensor(o.probs);
  if (tensor.sidecar.contains("classes")) {
    const auto names = tensor.sidecar["classes"].get<std::vector<std::string>>();
    if (names != model.classes().names()) {
      throw DataError(DataErrc::shape_mismatch,
                      "'" + o.probs + "' field 'classes' differs from the property model classes");
    }
  }
  const auto maps = inference::infer_property_maps(tensor.data, model, ctx.threads);
  const auto hash = io::model_hash(model);

  io::AtomicWriter writer;
  Json ranges = Json::object();
  for (Parameter p : {Parameter::sinkage_exponent, Parameter::friction_angle}) {
    const auto& m = maps[p];
    Raster<float> packed(m.mean.height(), m.mean.width(), 2);
    for (std::size_t i = 0; i < m.mean.pixel_count(); ++i) {
      packed.data()[2 * i] = m.mean.data()[i];
      packed.data()[2 * i + 1] = m.std.data()[i];
    }
    io::write_tensor(writer, map_path(o.out_prefix, p), packed,
                     {{"parameter", terramech::parameter_id(p)},
                      {"units", terramech::parameter_units(p)},
                      {"channels", {"mean", "std"}},
                      {"model_hash", hash}});
    const auto [lo, hi] = std::minmax_element(m.mean.data().begin(), m.mean.data().end());
    ranges[std::string(terramech::parameter_id(p))] = {{"mean_min", *lo}, {"mean_max", *hi}};
  }
  writer.commit();
  summary(ctx, {{"command", "infer"},
                {"height", tensor.data.height()},
                {"width", tensor.data.width()},
                {"model_hash", hash},
                {"ranges", ranges}});
}

inference::PropertyMaps read_maps(const std::string& prefix) {
  inference::PropertyMaps maps;
  for (Parameter p : {Parameter::sinkage_exponent, Parameter::friction_angle}) {
    const auto path = map_path(prefix, p);
    const auto t = io::read_float_tensor(path);
    if (t.data.channels() != 2 || t.sidecar.value("parameter", "") != terramech::parameter_id(p)) {
      throw DataError(DataErrc::malformed,
                      "'" + path.string() + "' is not a mean/std map of " +
                          std::string(terramech::parameter_id(p)));
    }
    auto& m = p == Parameter::sinkage_exponent ? maps.sinkage_exponent : maps.friction_angle;
    m.parameter = p;
    m.mean = Raster<float>(t.data.height(), t.data.width(), 1);
    m.std = Raster<float>(t.data.height(), t.data.width(), 1);
    for (std::size_t i = 0; i < m.mean.pixel_count(); ++i) {
      m.mean.data()[i] = t.data.data()[2 * i];
      m.std.data()[i] = t.data.data()[2 * i + 1];
    }
  }
  if (!maps.sinkage_exponent.mean.same_shape(maps.friction_angle.mean)) {
    throw DataError(DataErrc::shape_mismatch, "property maps under '" + prefix + "' differ in size");
  }
  return maps;
}

// ---------------------------------------------------------------- route

struct RouteOptions {
  std::string maps_prefix;
  std::string route;
  std::optional<double> fs_n;
  std::optional<double> fs_phi;
  double multiplier = 1.0;
  std::string out;
};

void run_route(const Context& ctx, const RouteOptions& o) {
  const auto maps = read_maps(o.maps_prefix);
  const auto input = io::route_from_csv(io::read_csv(o.route));
  auto prediction = inference::predict_route(maps, input.route);
  io::attach_truth(prediction, input);
  io::write_file_atomic(o.out, io::route_prediction_to_csv(prediction));

  std::vector<double> mu_n, sd_n, tr_n, mu_phi, sd_phi, tr_phi;
  std::size_t points = 0;
  for (const auto& w : prediction.wheels) {
    for (const auto& p : w.points) {
      ++points;
      if (!p.truth_n || !p.truth_phi) continue;
      mu_n.push_back(p.mu_n);
      sd_n.push_back(p.sigma_n);
      tr_n.push_back(*p.truth_n);
      mu_phi.push_back(p.mu_phi);
      sd_phi.push_back(p.sigma_phi);
      tr_phi.push_back(*p.truth_phi);
    }
  }
  Json s{{"command", "route"}, {"points", points}, {"points_with_truth", tr_n.size()}};
  if (!tr_n.empty()) {
    const double fs_n = o.fs_n.value_or(ctx.config.full_scale_n);
    const double fs_phi = o.fs_phi.value_or(ctx.config.full_scale_phi_deg);
    const double fse_n = inference::full_scale_error(mu_n, tr_n, fs_n);
    const double fse_phi = inference::full_scale_error(mu_phi, tr_phi, fs_phi);
    const double cov_n = inference::interval_coverage(mu_n, sd_n, tr_n, o.multiplier);
    const double cov_phi = inference::interval_coverage(mu_phi, sd_phi, tr_phi, o.multiplier);
    s["fse_N"] = fse_n;
    s["fse_phi"] = fse_phi;
    s["coverage_N"] = cov_n;
    s["coverage_phi"] = cov_phi;
    s["fse"] = 0.5 * (fse_n + fse_phi);
    s["coverage"] = 0.5 * (cov_n + cov_phi);
    s["multiplier"] = o.multiplier;
  }
  summary(ctx, s);
}

// ---------------------------------------------------------------- flags

struct FlagsOptions {
  std::string maps_prefix;
  std::optional<double> n_max, phi_min, sigma_n_max, sigma_phi_max;
  std::string out;
};

void run_flags(const Context& ctx, const FlagsOptions& o) {
  auto t = ctx.config.hazard;
  if (o.n_max) t.n_max = *o.n_max;
  if (o.phi_min) t.phi_min_deg = *o.phi_min;
  if (o.sigma_n_max) t.sigma_n_max = *o.sigma_n_max;
  if (o.sigma_phi_max) t.sigma_phi_max = *o.sigma_phi_max;
  const auto result = inference::hazard_flags(read_maps(o.maps_prefix), t);

  Json legend{{"1", "soft: mean N above n_max"},
              {"2", "slippery: mean phi below phi_min"},
              {"4", "uncertain: std of N or phi above its limit"}};
  Json thresholds{{"n_max", finite_or_null(t.n_max)},
                  {"phi_min", finite_or_null(t.phi_min_deg)},
                  {"sigma_n_max", finite_or_null(t.sigma_n_max)},
                  {"sigma_phi_max", finite_or_null(t.sigma_phi_max)}};
  io::AtomicWriter writer;
  io::write_tensor(writer, o.out, result.flags, {{"legend", legend}, {"thresholds", thresholds}});
  writer.commit();
  const auto& s = result.summary;
  summary(ctx, {{"command", "flags"},
                {"pixels", s.pixels},
                {"soft", s.soft},
                {"slippery", s.slippery},
                {"uncertain", s.uncertain},
                {"any", s.any}});
}

// ---------------------------------------------------------------- propagate

struct PropagateOptions {
  std::string camera;
  std::string poses;
  std::string src_frame;
  std::string dst_frame;
  std::string src_labels;
  std::string src_depth;
  std::string dst_depth;
  std::string classes;
  std::optional<double> z_tol;
  std::string out;
};

labeling::DepthImage read_depth(const std::string& path) {
  auto t = io::read_float_tensor(path);
  if (t.data.channels() != 1) {
    throw DataError(DataErrc::shape_mismatch, "'" + path + "' must be a single-channel depth image");
  }
  return std::move(t.data);
}

void run_propagate(const Context& ctx, const PropagateOptions& o) {
  const auto cam = io::camera_from_json(
      io::read_json_file(resolve_path(o.camera, ctx.config.paths.camera, "camera")));
  const auto poses = io::poses_from_csv(io::read_csv(o.poses));
  auto find_pose = [&](const std::string& frame) {
    const auto it = poses.find(frame);
    if (it == poses.end()) {
      throw DataError(DataErrc::invalid_value, "'" + o.poses + "' has no frame '" + frame + "'");
    }
    return it->second;
  };
  const auto classes = resolve_classes(ctx, o.classes);
  const double z_tol = o.z_tol.value_or(ctx.config.depth_tolerance);
  const auto result = labeling::propagate_labels(
      io::read_label_raster(o.src_labels), read_depth(o.src_depth), find_pose(o.src_frame),
      find_pose(o.dst_frame), read_depth(o.dst_depth), cam, z_tol, classes.size());

  io::AtomicWriter writer;
  io::write_label_raster(writer, o.out, result.labels,
                         {{"source_frame", o.src_frame}, {"frame", o.dst_frame}});
  writer.commit();
  std::size_t labelled = 0;
  for (auto v : result.labels.data()) labelled += v != kIgnoreLabel;
  const auto& s = result.stats;
  summary(ctx, {{"command", "propagate"},
                {"labelled_pixels", labelled},
                {"propagated", s.propagated},
                {"occluded", s.occluded},
                {"out_of_view", s.out_of_view},
                {"invalid_depth", s.invalid_depth},
                {"overwritten", s.overwritten}});
}

// ---------------------------------------------------------------- render

struct RenderOptions {
  std::string kind = "heatmap";
  std::string tensor;
  int channel = 0;
  std::optional<double> min, max;
  std::string labels;
  std::string image;
  std::string classes;
  int alpha = 128;
  std::string out;
};

void run_render(const Context& ctx, const RenderOptions& o) {
  RgbImage img;
  if (o.kind == "heatmap") {
    if (o.tensor.empty() || !o.min || !o.max) {
      throw CLI::ValidationError("render", "heatmap needs --tensor, --min and --max");
    }
    img = io::render_heatmap(io::read_float_tensor(o.tensor).data, *o.min, *o.max, o.channel);
  } else {
    if (o.labels.empty()) throw CLI::ValidationError("render", o.kind + " needs --labels");
    const auto classes = resolve_classes(ctx, o.classes);
    const auto labels = io::read_label_raster(o.labels);
    if (o.kind == "labels") {
      img = io::render_labels(labels, classes);
    } else {
      if (o.image.empty()) throw CLI::ValidationError("render", "overlay needs --image");
      img = io::render_overlay(io::read_ppm(o.image), labels, classes, o.alpha);
    }
  }
  io::write_file_atomic(o.out, io::encode_ppm(img));
  summary(ctx, {{"command", "render"},
                {"kind", o.kind},
                {"height", img.height()},
                {"width", img.width()}});
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Terrain segmentation and terramechanics property inference"};
  app.name("terraprop");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed for every stochastic step");
  app.add_option("--threads", g.threads, "Worker threads for data-parallel steps")
      ->check(CLI::Range(1, 256));
  app.add_option("--config", g.config_path, "Pipeline configuration JSON");

  std::function<void(const Context&)> action;
  auto bind = [&action](auto& options, auto fn) {
    return [&action, &options, fn] { action = [&options, fn](const Context& c) { fn(c, options); }; };
  };

  WeightsOptions weights;
  auto* sc = app.add_subcommand("weights", "Class loss weights from label statistics");
  sc->add_option("--labels", weights.labels, "Label rasters")->required();
  sc->add_option("--classes", weights.classes, "Class set JSON");
  sc->add_option("--constant", weights.constant, "Weighting constant c (> 1)");
  sc->add_option("--out", weights.out, "Output JSON")->required();
  sc->callback(bind(weights, run_weights));

  SynthCorpusOptions synth;
  sc = app.add_subcommand("synth-corpus", "Write the procedural texture corpus");
  sc->add_option("--out", synth.out, "Output directory")->required();
  sc->add_option("--train", synth.train, "Training images")->check(CLI::Range(1, 10000));
  sc->add_option("--test", synth.test, "Test images")->check(CLI::Range(1, 10000));
  sc->add_option("--size", synth.size, "Image side in pixels")->check(CLI::Range(16, 4096));
  sc->callback(bind(synth, run_synth_corpus));

  TrainOptions train;
  sc = app.add_subcommand("train", "Train the pixel classifier");
  sc->add_option("--corpus", train.corpus, "Corpus manifest.json (uses its train split)");
  sc->add_option("--supervision", train.supervision, "Corpus labels to use")
      ->check(CLI::IsMember({"full", "partial"}));
  sc->add_option("--image", train.images, "Training images (PPM)");
  sc->add_option("--labels", train.labels, "Label rasters matching --image");
  sc->add_option("--classes", train.classes, "Class set JSON");
  sc->add_option("--epochs", train.epochs, "Override the configured epoch count")
      ->check(CLI::NonNegativeNumber);
  sc->add_option("--learning-rate", train.learning_rate, "Override the initial step size")
      ->check(CLI::PositiveNumber);
  sc->add_flag("--uniform-weights", train.uniform_weights, "Unweighted cross-entropy");
  sc->add_option("--out", train.out, "Classifier JSON")->required();
  sc->add_option("--history", train.history, "Loss-per-epoch CSV");
  sc->callback(bind(train, run_train));

  PredictOptions predict;
  sc = app.add_subcommand("predict", "Per-pixel class probabilities for an image");
  sc->add_option("--classifier", predict.classifier, "Classifier JSON");
  sc->add_option("--image", predict.image, "Input PPM")->required();
  sc->add_option("--out", predict.out, "Probability tensor (float32)")->required();
  sc->add_option("--labels-out", predict.labels_out, "Arg-max label raster");
  sc->callback(bind(predict, run_predict));

  MetricsOptions metrics;
  sc = app.add_subcommand("metrics", "IoU, recall, mIoU and pixel accuracy");
  sc->add_option("--pred", metrics.pred, "Predicted label rasters or probability tensors")->required();
  sc->add_option("--truth", metrics.truth, "Ground-truth label rasters")->required();
  sc->add_option("--classes", metrics.classes, "Class set JSON");
  sc->add_option("--miou-mode", metrics.miou_mode, "Average over present or all classes")
      ->check(CLI::IsMember({"present", "all"}));
  sc->add_option("--out", metrics.out, "Metrics CSV");
  sc->add_option("--confusion", metrics.confusion, "Confusion matrix CSV");
  sc->callback(bind(metrics, run_metrics));

  RatioOptions ratio;
  sc = app.add_subcommand("ratio-exp", "Accuracy against the fraction of fully labelled images");
  sc->add_option("--corpus", ratio.corpus, "Corpus manifest.json")->required();
  sc->add_option("--ratios", ratio.ratios, "Fractions in [0, 1]")->delimiter(',');
  sc->add_option("--miou-mode", ratio.miou_mode, "Average over present or all classes")
      ->check(CLI::IsMember({"present", "all"}));
  sc->add_option("--epochs", ratio.epochs, "Override the configured epoch count")
      ->check(CLI::NonNegativeNumber);
  sc->add_option("--out", ratio.out, "Results CSV")->required();
  sc->callback(bind(ratio, run_ratio_exp));

  IdentifyOptions identify;
  sc = app.add_subcommand("identify", "Identify N and phi for every sample of a wheel log");
  sc->add_option("--log", identify.log, "Interaction log CSV")->required();
  sc->add_option("--window", identify.window, "Smoothing window in seconds (0 disables)")
      ->check(CLI::NonNegativeNumber);
  sc->add_option("--out", identify.out, "Identification report CSV")->required();
  sc->callback(bind(identify, run_identify));

  SynthReportOptions synth_report;
  sc = app.add_subcommand("synth-report", "Identification report drawn from the reference model");
  sc->add_option("--per-class", synth_report.per_class, "Samples per class")->check(CLI::Range(2, 10000000));
  sc->add_flag("--truncate", synth_report.truncate, "Redraw values outside the solver box");
  sc->add_option("--out", synth_report.out, "Identification report CSV")->required();
  sc->callback(bind(synth_report, run_synth_report));

  FitOptions fit;
  sc = app.add_subcommand("fit", "Per-class Gaussian property model from identification reports");
  sc->add_option("--report", fit.reports, "Identification report CSVs")->required();
  sc->add_option("--classes", fit.classes, "Class set JSON");
  sc->add_option("--out", fit.out, "Property model JSON")->required();
  sc->callback(bind(fit, run_fit));

  InferOptions infer;
  sc = app.add_subcommand("infer", "Dense property maps from class probabilities");
  sc->add_option("--probs", infer.probs, "Probability tensor")->required();
  sc->add_option("--model", infer.model, "Property model JSON");
  sc->add_option("--out-prefix", infer.out_prefix, "Writes <prefix>N.f32 and <prefix>phi.f32")
      ->required();
  sc->callback(bind(infer, run_infer));

  RouteOptions route;
  sc = app.add_subcommand("route", "Sample property maps along wheel tracks");
  sc->add_option("--maps-prefix", route.maps_prefix, "Prefix given to infer")->required();
  sc->add_option("--route", route.route, "Route CSV")->required();
  sc->add_option("--fs-n", route.fs_n, "Full-scale range of N")->check(CLI::PositiveNumber);
  sc->add_option("--fs-phi", route.fs_phi, "Full-scale range of phi (deg)")->check(CLI::PositiveNumber);
  sc->add_option("--multiplier", route.multiplier, "Coverage band in sigmas")
      ->check(CLI::NonNegativeNumber);
  sc->add_option("--out", route.out, "Route prediction CSV")->required();
  sc->callback(bind(route, run_route));

  FlagsOptions flags;
  sc = app.add_subcommand("flags", "Hazard bitmask from property maps");
  sc->add_option("--maps-prefix", flags.maps_prefix, "Prefix given to infer")->required();
  sc->add_option("--n-max", flags.n_max, "Soft when mean N exceeds this");
  sc->add_option("--phi-min", flags.phi_min, "Slippery when mean phi is below this (deg)");
  sc->add_option("--sigma-n-max", flags.sigma_n_max, "Uncertain when std N exceeds this");
  sc->add_option("--sigma-phi-max", flags.sigma_phi_max, "Uncertain when std phi exceeds this");
  sc->add_option("--out", flags.out, "Flag raster (uint8)")->required();
  sc->callback(bind(flags, run_flags));

  PropagateOptions propagate;
  sc = app.add_subcommand("propagate", "Carry labels to another frame through depth and poses");
  sc->add_option("--camera", propagate.camera, "Camera intrinsics JSON");
  sc->add_option("--poses", propagate.poses, "Pose CSV")->required();
  sc->add_option("--src-frame", propagate.src_frame, "Labelled frame id")->required();
  sc->add_option("--dst-frame", propagate.dst_frame, "Target frame id")->required();
  sc->add_option("--src-labels", propagate.src_labels, "Source label raster")->required();
  sc->add_option("--src-depth", propagate.src_depth, "Source depth tensor")->required();
  sc->add_option("--dst-depth", propagate.dst_depth, "Target depth tensor")->required();
  sc->add_option("--classes", propagate.classes, "Class set JSON");
  sc->add_option("--z-tol", propagate.z_tol, "Depth agreement tolerance (m)")
      ->check(CLI::NonNegativeNumber);
  sc->add_option("--out", propagate.out, "Propagated label raster")->required();
  sc->callback(bind(propagate, run_propagate));

  RenderOptions render;
  sc = app.add_subcommand("render", "PPM visualisations");
  sc->add_option("--kind", render.kind, "heatmap, labels or overlay")
      ->check(CLI::IsMember({"heatmap", "labels", "overlay"}));
  sc->add_option("--tensor", render.tensor, "Float tensor for heatmaps");
  sc->add_option("--channel", render.channel, "Tensor channel")->check(CLI::NonNegativeNumber);
  sc->add_option("--min", render.min, "Value mapped to the first colour");
  sc->add_option("--max", render.max, "Value mapped to the last colour");
  sc->add_option("--labels", render.labels, "Label raster");
  sc->add_option("--image", render.image, "Base image for overlays");
  sc->add_option("--classes", render.classes, "Class set JSON");
  sc->add_option("--alpha", render.alpha, "Overlay opacity 0-255")->check(CLI::Range(0, 255));
  sc->add_option("--out", render.out, "Output PPM")->required();
  sc->callback(bind(render, run_render));

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);

    Context ctx{g.config_path.empty() ? io::PipelineConfig{}
                                      : io::load_pipeline_config(g.config_path),
                0, g.threads, out};
    ctx.seed = g.seed.value_or(ctx.config.seed);
    action(ctx);
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::Error& e) {
    // Parse and validation problems, including checks raised by subcommands.
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace terraprop::cli
