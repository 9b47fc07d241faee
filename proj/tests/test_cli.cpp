#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "phdim/cli.hpp"
#include "phdim/io.hpp"
#include "phdim/verify.hpp"

using namespace phdim;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            (std::string("phdim-test-") +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  std::size_t file_count() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(path_), fs::directory_iterator{}));
  }

 private:
  fs::path path_;
};

int run_quiet(const ExperimentConfig& c, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = run(c, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST(Config, RoundTripsThroughJson) {
  ExperimentConfig c;
  c.command = Command::kDimension;
  c.seed = 1234567890123ULL;
  c.family = Family::kUniformCube;
  c.m = 3;
  c.complex = ComplexKind::kCech;
  c.method = DimensionMethod::kPh;
  c.sizes = {100, 200, 400, 800};
  c.alpha_grid = {0.5, 1.0};
  c.scales = {0.25, 0.125, 0.0625};
  c.output = "out.json";
  const auto back = parse_config(canonical_config(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(canonical_config(back), canonical_config(c));
  ExperimentConfig defaults;
  EXPECT_EQ(parse_config(canonical_config(defaults)), defaults);
}

TEST(Config, RejectsUnknownKeysBadTypesAndVersions) {
  auto j = config_to_json(ExperimentConfig{});
  j["colour"] = "blue";
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  j = config_to_json(ExperimentConfig{});
  j["seed"] = "seven";
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  j = config_to_json(ExperimentConfig{});
  j["format_version"] = 99;
  EXPECT_THROW(config_from_json(j), InvalidArgument);
  EXPECT_THROW(parse_config("{not json"), InvalidArgument);
}

TEST(Run, BipartiteLevelTwoWritesExactIntervals) {
  TempDir dir;
  ExperimentConfig c;
  c.command = Command::kBipartite;
  c.level = 2;
  c.output = (dir / "bip.json").string();
  c.table = (dir / "bip.csv").string();
  ASSERT_EQ(run_quiet(c), kExitOk);
  const auto j = Json::parse(read_file(c.output));
  EXPECT_EQ(j.at("count"), 9);
  EXPECT_EQ(j.at("format_version"), kFormatVersion);
  for (const auto& iv : j.at("intervals")) {
    EXPECT_EQ(iv.at("birth").get<double>(), 0.125);
    EXPECT_EQ(iv.at("death").get<double>(), 0.25);
  }
  std::istringstream csv(read_file(c.table));
  EXPECT_EQ(read_barcode_csv(csv).count(1), 9u);
}

TEST(Run, IdenticalConfigsGiveByteIdenticalArtifacts) {
  TempDir dir;
  for (Command cmd : {Command::kGenerate, Command::kBarcode, Command::kMst}) {
    ExperimentConfig c;
    c.command = cmd;
    c.family = Family::kSierpinski;
    c.n = 300;
    c.seed = 77;
    c.output = (dir / "a.out").string();
    c.table = (dir / "a.csv").string();
    ASSERT_EQ(run_quiet(c), kExitOk) << command_name(cmd);
    const std::string first = read_file(c.output);
    const std::string first_table = fs::exists(c.table) ? read_file(c.table) : "";
    ASSERT_EQ(run_quiet(c), kExitOk);
    EXPECT_EQ(read_file(c.output), first) << command_name(cmd);
    EXPECT_EQ(fs::exists(c.table) ? read_file(c.table) : "", first_table);
    fs::remove(c.output);
    fs::remove(c.table);
  }
}

TEST(Run, GenerateWritesSidecarWithConfig) {
  TempDir dir;
  ExperimentConfig c;
  c.command = Command::kGenerate;
  c.family = Family::kUniformCube;
  c.n = 50;
  c.seed = 3;
  c.output = (dir / "cloud.csv").string();
  ASSERT_EQ(run_quiet(c), kExitOk);
  const auto side = Json::parse(read_file(c.output + ".json"));
  EXPECT_EQ(config_from_json(side.at("config")), c);
  std::istringstream csv(read_file(c.output));
  EXPECT_EQ(read_point_cloud_csv(csv), gen_uniform_cube(50, 2, 3));
}

TEST(Run, ValidationFailureWritesNothing) {
  TempDir dir;
  ExperimentConfig c;
  c.command = Command::kDimension;
  c.method = DimensionMethod::kMst;
  c.sizes = {100, 200};
  c.output = (dir / "est.json").string();
  c.table = (dir / "est.csv").string();
  std::string err;
  EXPECT_EQ(run_quiet(c, nullptr, &err), kExitInvalid);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(dir.file_count(), 0u);

  ExperimentConfig bad;
  bad.command = Command::kBarcode;
  bad.input = (dir / "missing.csv").string();
  bad.output = (dir / "bc.json").string();
  EXPECT_EQ(run_quiet(bad), kExitInvalid);
  EXPECT_EQ(dir.file_count(), 0u);
}

TEST(Run, BudgetExceededExitCode) {
  TempDir dir;
  ExperimentConfig c;
  c.command = Command::kArcs;
  c.sizes = {100, 800};
  c.output = (dir / "arcs.json").string();
  EXPECT_EQ(run_quiet(c), kExitBudget);
  EXPECT_EQ(dir.file_count(), 0u);
}

TEST(Run, ArcsCechBarcodeHasManyLoops) {
  ExperimentConfig c;
  c.command = Command::kBarcode;
  c.family = Family::kArcs;
  c.n = 100;
  c.complex = ComplexKind::kCech;
  c.degree = 1;
  std::string out;
  ASSERT_EQ(run_quiet(c, &out), kExitOk);
  const auto j = Json::parse(out);
  EXPECT_GT(j.at("counts").at("1").get<std::size_t>(), 100u);
  EXPECT_EQ(barcode_from_json(j).count(1), j.at("counts").at("1").get<std::size_t>());
}

TEST(Run, SierpinskiBoxDimension) {
  ExperimentConfig c;
  c.command = Command::kDimension;
  c.method = DimensionMethod::kBox;
  c.family = Family::kSierpinski;
  c.n = 50'000;
  std::string out;
  ASSERT_EQ(run_quiet(c, &out), kExitOk);
  EXPECT_NEAR(Json::parse(out).at("estimate").get<double>(), 1.585, 0.05);
}

TEST(Run, MetricInputOnlyAcceptsRips) {
  TempDir dir;
  {
    std::ostringstream csv;
    write_metric_csv(csv, gen_bipartite_space(1));
    write_file_atomic(dir / "m.csv", csv.str());
  }
  ExperimentConfig c;
  c.command = Command::kBarcode;
  c.input = (dir / "m.csv").string();
  c.input_is_metric = true;
  c.complex = ComplexKind::kRips;
  std::string out;
  ASSERT_EQ(run_quiet(c, &out), kExitOk);
  EXPECT_EQ(Json::parse(out).at("counts").at("1"), 1);
  c.complex = ComplexKind::kCech;
  EXPECT_EQ(run_quiet(c), kExitInvalid);
}

TEST(Verify, FilterSelectsOnlyMatchingChecks) {
  VerifyOptions opt;
  opt.filter = "bipartite";
  const auto rep = verify_suite(opt);
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_EQ(rep.checks[0].criterion, 1);
  EXPECT_TRUE(rep.passed());
}

TEST(Verify, CorruptedGeneratorFailsTheBipartiteCheck) {
  VerifyOptions opt;
  opt.filter = "bipartite";
  // Shifted level constant: distances belong to the next level.
  opt.bipartite_generator = [](int level) { return gen_bipartite_space(level + 1); };
  const auto rep = verify_suite(opt);
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_FALSE(rep.passed());
  opt.bipartite_generator = [](int) -> FiniteMetricSpace { throw Error("boom"); };
  const auto crashed = verify_suite(opt);
  EXPECT_FALSE(crashed.passed());
  EXPECT_NE(crashed.checks[0].detail.find("boom"), std::string::npos);
}

TEST(Io, BarcodeJsonAndCsvRoundTrip) {
  const Barcode b({{0, 0.0, 0.5}, {1, 0.25, 0.5}, {1, 0.3, kInfinity}}, true, ComplexKind::kRips);
  const auto back = barcode_from_json(Json::parse(barcode_to_json(b).dump()));
  EXPECT_EQ(back.intervals(), b.intervals());
  EXPECT_EQ(back.source(), ComplexKind::kRips);
  std::stringstream ss;
  write_barcode_csv(ss, b);
  EXPECT_EQ(read_barcode_csv(ss).intervals(), b.intervals());
  EXPECT_TRUE(barcode_to_json(b).at("intervals")[2].at("death").is_null());
}

TEST(Io, AtomicWriteReplacesWholeFile) {
  TempDir dir;
  const auto p = dir / "f.txt";
  write_file_atomic(p, "first version\n");
  write_file_atomic(p, "second\n");
  EXPECT_EQ(read_file(p), "second\n");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  EXPECT_THROW(read_file(dir / "nope"), std::exception);
}
