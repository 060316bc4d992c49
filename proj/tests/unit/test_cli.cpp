#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "terraprop/io/atomic_file.hpp"
#include "terraprop/io/csv.hpp"
#include "terraprop/io/json_codecs.hpp"
#include "terraprop/io/tensor_io.hpp"

namespace fs = std::filesystem;

namespace {

using terraprop::io::Json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  [[nodiscard]] Json summary() const {
    const auto end = out.find_last_not_of('\n');
    const auto start = out.rfind('\n', end);
    return Json::parse(out.substr(start == std::string::npos ? 0 : start + 1, end - start));
  }
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("terraprop_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "terraprop");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = terraprop::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // One-hot probability tensor over the six default classes.
  std::string reference_model() {
    const auto p = path("reference.json");
    terraprop::io::write_file_atomic(
        p, terraprop::io::property_model_to_json(terraprop::terramech::reference_property_model()).dump());
    return p;
  }

  void write_one_hot(const std::string& name, int cls, int h, int w) {
    terraprop::Raster<float> p(h, w, 6, 0.0f);
    for (std::size_t i = 0; i < p.pixel_count(); ++i) p.pixel(i)[cls] = 1.0f;
    terraprop::io::AtomicWriter writer;
    terraprop::io::write_tensor(writer, path(name), p,
                                Json{{"classes", {"soil", "stony soil", "gravel", "bedrock", "rock",
                                                  "background"}}});
    writer.commit();
  }

  fs::path dir_;
};

TEST_F(Cli, FitOnReferenceDrawsRecoversSoil) {
  auto r = run({"--seed", "4", "synth-report", "--per-class", "2000", "--out", path("report.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"fit", "--report", path("report.csv"), "--out", path("model.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = r.summary()["model"];
  EXPECT_NEAR(model["soil"]["N"]["mu"].get<double>(), 1.36, 0.02);
  EXPECT_NEAR(model["soil"]["N"]["sigma"].get<double>(), 0.25, 0.02);
  EXPECT_EQ(model["background"]["N"]["mu"].get<double>(), 0.0);
}

TEST_F(Cli, InferOneHotBedrockGivesConstantMaps) {
  write_one_hot("probs.f32", 3, 6, 8);
  const auto r = run({"infer", "--probs", path("probs.f32"), "--model", reference_model(), "--out-prefix", path("map_")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto n = terraprop::io::read_float_tensor(path("map_N.f32"));
  ASSERT_EQ(n.data.channels(), 2);
  for (std::size_t i = 0; i < n.data.pixel_count(); ++i) {
    EXPECT_EQ(n.data.pixel(i)[0], 0.10f);
    EXPECT_EQ(n.data.pixel(i)[1], 0.01f);
  }
  EXPECT_EQ(n.sidecar["parameter"], "N");
}

TEST_F(Cli, RouteWithPerfectTruthHasNoError) {
  write_one_hot("probs.f32", 0, 6, 8);
  ASSERT_EQ(run({"infer", "--probs", path("probs.f32"), "--model", reference_model(), "--out-prefix", path("map_")}).code, 0);
  const auto n = terraprop::io::read_float_tensor(path("map_N.f32"));
  const auto phi = terraprop::io::read_float_tensor(path("map_phi.f32"));
  std::string csv = "wheel,row,col,truth_N,truth_phi\n";
  for (int c = 0; c < 8; ++c) {
    csv += "0,2," + std::to_string(c) + "," + terraprop::io::format_double(n.data(2, c, 0)) + "," +
           terraprop::io::format_double(phi.data(2, c, 0)) + "\n";
  }
  terraprop::io::write_file_atomic(path("route.csv"), csv);
  const auto r = run({"route", "--maps-prefix", path("map_"), "--route", path("route.csv"), "--out",
                      path("pred.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = r.summary();
  EXPECT_EQ(s["fse"].get<double>(), 0.0);
  EXPECT_EQ(s["coverage"].get<double>(), 1.0);
}

TEST_F(Cli, SameSeedGivesByteIdenticalOutputs) {
  for (const char* name : {"a.csv", "b.csv"}) {
    ASSERT_EQ(run({"--seed", "11", "synth-report", "--per-class", "50", "--out", path(name)}).code, 0);
  }
  EXPECT_EQ(terraprop::io::read_file(path("a.csv")), terraprop::io::read_file(path("b.csv")));
  ASSERT_EQ(run({"--seed", "12", "synth-report", "--per-class", "50", "--out", path("c.csv")}).code, 0);
  EXPECT_NE(terraprop::io::read_file(path("a.csv")), terraprop::io::read_file(path("c.csv")));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"infer"}).code, 2);
  const auto missing = run({"infer", "--probs", path("absent.f32"), "--model", reference_model(), "--out-prefix", path("m_")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("absent.f32"), std::string::npos);
}

TEST_F(Cli, PayloadMismatchWritesNothing) {
  write_one_hot("probs.f32", 0, 2, 2);
  fs::resize_file(path("probs.f32"), 23 * 4);
  const auto r = run({"infer", "--probs", path("probs.f32"), "--model", reference_model(), "--out-prefix", path("map_")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("payload length mismatch"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("map_N.f32")));
}

}  // namespace
