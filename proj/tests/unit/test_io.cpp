#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "terraprop/error.hpp"
#include "terraprop/io/atomic_file.hpp"
#include "terraprop/io/config.hpp"
#include "terraprop/io/csv.hpp"
#include "terraprop/io/json_codecs.hpp"
#include "terraprop/io/ppm.hpp"
#include "terraprop/io/render.hpp"
#include "terraprop/io/tensor_io.hpp"

namespace fs = std::filesystem;

namespace {

using namespace terraprop;
using namespace terraprop::io;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("terraprop_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

DataErrc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no DataError";
  return DataErrc::io;
}

using TensorIo = TempDir;

TEST_F(TensorIo, FloatRoundTripIsBitExact) {
  Raster<float> r(3, 4, 2);
  for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = std::ldexp(1.0f + i, -int(i)) - 0.3f * i;
  r.data()[5] = std::numeric_limits<float>::denorm_min();
  r.data()[6] = -0.0f;
  AtomicWriter w;
  write_tensor(w, dir_ / "t.f32", r, Json{{"parameter", "N"}});
  w.commit();
  const auto back = read_float_tensor(dir_ / "t.f32");
  ASSERT_EQ(back.data.data().size(), r.data().size());
  EXPECT_EQ(std::memcmp(back.data.data().data(), r.data().data(), r.data().size() * 4), 0);
  EXPECT_EQ(back.sidecar["parameter"], "N");
  EXPECT_EQ(fs::file_size(dir_ / "t.f32"), 3u * 4u * 2u * 4u);
}

TEST_F(TensorIo, PayloadIsLittleEndian) {
  Raster<float> r(1, 1, 1, 1.0f);
  const auto bytes = encode_payload(r);
  ASSERT_EQ(bytes.size(), 4u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[3]), 0x3f);
  EXPECT_EQ(static_cast<unsigned char>(bytes[2]), 0x80);
}

TEST(TensorDecode, PayloadLengthMismatch) {
  const auto sidecar = make_sidecar("float32", 2, 2, 6);
  const std::string payload(23 * 4, '\0');
  EXPECT_EQ(code_of([&] { decode_float_tensor(payload, sidecar); }), DataErrc::payload_length_mismatch);
}

TEST(TensorDecode, UnknownDtype) {
  const auto sidecar = make_sidecar("float16", 1, 1, 1);
  EXPECT_EQ(code_of([&] { decode_float_tensor(std::string(2, '\0'), sidecar); }), DataErrc::unknown_dtype);
}

TEST_F(TensorIo, TruncatedFileAndMissingSidecar) {
  Raster<float> r(4, 4, 1, 2.0f);
  AtomicWriter w;
  write_tensor(w, dir_ / "t.f32", r);
  w.commit();
  fs::resize_file(dir_ / "t.f32", 10);
  const auto c = code_of([&] { read_float_tensor(dir_ / "t.f32"); });
  EXPECT_TRUE(c == DataErrc::truncated_file || c == DataErrc::payload_length_mismatch);
  fs::remove(sidecar_path(dir_ / "t.f32"));
  EXPECT_EQ(code_of([&] { read_float_tensor(dir_ / "t.f32"); }), DataErrc::io);
}

TEST_F(TensorIo, LabelRasterRoundTrip) {
  LabelImage l(2, 3, 1);
  l.data() = {0, 1, 2, kIgnoreLabel, 4, 5};
  AtomicWriter w;
  write_label_raster(w, dir_ / "l.u8", l);
  w.commit();
  EXPECT_EQ(read_label_raster(dir_ / "l.u8"), l);
}

TEST(Csv, MissingColumnIsNamed) {
  const auto table = parse_csv("t,F_N,omega,v,z,label\n0,1,2,3,4,soil\n", "log.csv");
  try {
    interaction_log_from_csv(table);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.code(), DataErrc::missing_column);
    EXPECT_NE(std::string(e.what()).find("M_R"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("log.csv"), std::string::npos);
  }
}

TEST(Csv, QuotedFieldsAndNumbers) {
  const auto t = parse_csv("a,b\n\"x,y\",1.5\n\"he said \"\"hi\"\"\",-2e3\n");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.text(0, 0), "x,y");
  EXPECT_EQ(t.text(1, 0), "he said \"hi\"");
  EXPECT_EQ(t.number(1, 1), -2000.0);
  EXPECT_EQ(code_of([&] { t.number(0, 0); }), DataErrc::malformed);
}

TEST(Csv, WriterRoundTripsDoubles) {
  CsvWriter w({"v"});
  const double x = 0.1 + 0.2;
  w.field(x).end_row();
  EXPECT_EQ(parse_csv(w.str()).number(0, 0), x);
}

TEST(Csv, InteractionLogRoundTrip) {
  std::vector<terramech::InteractionSample> log(2);
  log[0] = {0.0, 120.5, 3.25, 2.0, 0.23, 0.006, "soil"};
  log[1] = {0.1, 99.0, 1.0, 2.1, 0.2, 0.004, ""};
  const auto back = interaction_log_from_csv(parse_csv(interaction_log_to_csv(log)));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].torque, 3.25);
  EXPECT_EQ(back[0].label, "soil");
  EXPECT_EQ(back[1].label, "");
}

TEST(Ppm, RoundTripAndErrors) {
  RgbImage img(2, 3, 3);
  for (std::size_t i = 0; i < img.data().size(); ++i) img.data()[i] = static_cast<std::uint8_t>(i * 13);
  const auto bytes = encode_ppm(img);
  EXPECT_EQ(bytes.substr(0, 2), "P6");
  EXPECT_EQ(decode_ppm(bytes), img);
  EXPECT_EQ(code_of([&] { decode_ppm("P5\n1 1\n255\nx"); }), DataErrc::malformed);
  EXPECT_EQ(code_of([&] { decode_ppm(bytes.substr(0, bytes.size() - 2)); }), DataErrc::truncated_file);
}

TEST(JsonCodecs, ClassifierRoundTrip) {
  const auto classes = segmentation::TerrainClassSet::planetary_default();
  std::vector<double> w(6 * 10);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sin(double(i)) * 1e-3 + 1.0 / 3;
  const segmentation::PixelClassifier clf(classes, {3}, w);
  EXPECT_EQ(classifier_from_json(Json::parse(classifier_to_json(clf).dump())), clf);
}

TEST(JsonCodecs, PropertyModelRoundTripAndHash) {
  const auto ref = terramech::reference_property_model();
  const auto j = property_model_to_json(ref);
  EXPECT_EQ(j.begin().key(), "soil");
  const auto back = property_model_from_json(Json::parse(j.dump()), ref.classes());
  for (int k = 0; k < ref.size(); ++k) {
    EXPECT_EQ(back[k].sinkage_exponent, ref[k].sinkage_exponent);
    EXPECT_EQ(back[k].friction_angle, ref[k].friction_angle);
  }
  EXPECT_EQ(model_hash(back), model_hash(ref));
  auto other = j;
  other["soil"]["N"]["mu"] = 1.37;
  EXPECT_NE(model_hash(property_model_from_json(other, ref.classes())), model_hash(ref));
}

TEST(JsonCodecs, CameraAndPoses) {
  const labeling::CameraModel cam{500, 510, 319.5, 239.5, 640, 480};
  const auto back = camera_from_json(camera_to_json(cam));
  EXPECT_EQ(back.fy, 510);
  EXPECT_EQ(back.height, 480);
  const auto poses = poses_from_csv(parse_csv("frame,qw,qx,qy,qz,tx,ty,tz\nf0,1,0,0,0,1,2,3\n"));
  EXPECT_EQ(poses.at("f0").translation(), Eigen::Vector3d(1, 2, 3));
  EXPECT_THROW(poses_from_csv(parse_csv("frame,qw,qx,qy,qz,tx,ty,tz\nf0,2,0,0,0,1,2,3\n")), DataError);
}

TEST(JsonCodecs, RouteCsvWithTruth) {
  const auto in = route_from_csv(parse_csv("wheel,row,col,truth_N,truth_phi\n0,1,2,0.5,30\n1,3,4,,\n"));
  ASSERT_EQ(in.route.wheels.size(), 2u);
  EXPECT_TRUE(in.truth[0][0].has_value());
  EXPECT_FALSE(in.truth[1][0].has_value());
}

using AtomicFile = TempDir;

TEST_F(AtomicFile, UncommittedWriterLeavesNothing) {
  {
    AtomicWriter w;
    w.add(dir_ / "a.txt", "hello");
  }
  EXPECT_TRUE(fs::is_empty(dir_));
  AtomicWriter w;
  w.add(dir_ / "a.txt", "hello");
  w.commit();
  EXPECT_EQ(read_file(dir_ / "a.txt"), "hello");
}

TEST(Render, MidpointAndEndpoints) {
  Raster<float> r(1, 3, 1);
  r.data() = {0.0f, 0.5f, 1.0f};
  const auto img = render_heatmap(r, 0.0, 1.0);
  const auto& lut = viridis_lut();
  for (int ch = 0; ch < 3; ++ch) {
    EXPECT_EQ(img(0, 0, ch), lut[0][ch]);
    EXPECT_EQ(img(0, 1, ch), lut[128][ch]);
    EXPECT_EQ(img(0, 2, ch), lut[255][ch]);
  }
  Raster<float> out_of_range(1, 2, 1);
  out_of_range.data() = {-5.0f, 7.0f};
  const auto clamped = render_heatmap(out_of_range, 0.0, 1.0);
  EXPECT_EQ(clamped(0, 0, 1), lut[0][1]);
  EXPECT_EQ(clamped(0, 1, 1), lut[255][1]);
}

TEST(Render, ConstantMidpointIsUniformAndDeterministic) {
  const Raster<float> r(4, 5, 1, 0.5f);
  const auto a = encode_ppm(render_heatmap(r, 0.0, 1.0));
  const auto b = encode_ppm(render_heatmap(r, 0.0, 1.0));
  EXPECT_EQ(a, b);
  const auto img = render_heatmap(r, 0.0, 1.0);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) EXPECT_EQ(img.pixel(i)[0], viridis_lut()[128][0]);
}

TEST(Render, RejectsBadInput) {
  EXPECT_THROW(render_heatmap(Raster<float>(), 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(render_heatmap(Raster<float>(1, 1, 1), 1.0, 1.0), std::invalid_argument);
}

TEST(Render, LabelsUsePaletteAndBlackForIgnored) {
  const auto classes = segmentation::TerrainClassSet::planetary_default();
  LabelImage l(1, 2, 1);
  l.data() = {2, kIgnoreLabel};
  const auto img = render_labels(l, classes);
  for (int ch = 0; ch < 3; ++ch) {
    EXPECT_EQ(img(0, 0, ch), classes.color(2)[ch]);
    EXPECT_EQ(img(0, 1, ch), 0);
  }
}

using Config = TempDir;

TEST_F(Config, DefaultsRoundTripAndUnitsAreRequired) {
  const PipelineConfig defaults;
  const auto j = pipeline_config_to_json(defaults);
  const auto back = parse_pipeline_config(j, dir_);
  EXPECT_EQ(back.wheel, defaults.wheel);
  EXPECT_EQ(back.soil, defaults.soil);
  EXPECT_NEAR(back.solver.exit_angle, defaults.solver.exit_angle, 1e-15);
  EXPECT_EQ(back.training.epochs, defaults.training.epochs);

  auto no_units = j;
  no_units.erase("units");
  EXPECT_THROW(parse_pipeline_config(no_units, dir_), DataError);
  auto wrong = j;
  wrong["units"]["length"] = "mm";
  EXPECT_THROW(parse_pipeline_config(wrong, dir_), DataError);
  auto unknown = j;
  unknown["wheel"]["radiuss"] = 0.1;
  EXPECT_THROW(parse_pipeline_config(unknown, dir_), DataError);
}

TEST_F(Config, ReferencedFilesMustExist) {
  auto j = pipeline_config_to_json(PipelineConfig{});
  j["paths"] = Json{{"property_model", "model.json"}};
  EXPECT_THROW(parse_pipeline_config(j, dir_), DataError);
  std::ofstream(dir_ / "model.json") << "{}";
  const auto cfg = parse_pipeline_config(j, dir_);
  EXPECT_EQ(*cfg.paths.property_model, dir_ / "model.json");
}

}  // namespace
