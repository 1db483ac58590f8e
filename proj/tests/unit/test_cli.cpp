#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using inspectra::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("inspectra_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateIsByteDeterministic) {
  ASSERT_EQ(call({"--out", path("a.json"), "--seed", "7", "generate", "random-inspection"}).code, 0);
  ASSERT_EQ(call({"--out", path("b.json"), "--seed", "7", "generate", "random-inspection"}).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  ASSERT_EQ(call({"--out", path("c.json"), "--seed", "8", "generate", "random-inspection"}).code, 0);
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
}

TEST_F(Cli, ManifestRecordsFlagsAndDigests) {
  ASSERT_EQ(call({"--out", path("b.json"), "generate", "baseball", "--per-arc", "40"}).code, 0);
  const auto m = nlohmann::json::parse(slurp(path("b.json.manifest.json")));
  EXPECT_EQ(m.at("version"), "0.1.0");
  EXPECT_TRUE(m.contains("seeds"));
  EXPECT_TRUE(m.contains("flags"));
  EXPECT_TRUE(m.contains("outputs"));
  EXPECT_EQ(m.dump().find(path("b.json")) != std::string::npos, true);
}

TEST_F(Cli, AnalyzeReportsHorizonKeys) {
  ASSERT_EQ(call({"--out", path("c.json"), "generate", "circle"}).code, 0);
  const Result r = call({"--out", path("h.json"), "analyze", path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("h.json")));
  for (const char* k : {"total", "per_segment", "efficiency", "length", "method"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j.at("method"), "exact");
}

TEST_F(Cli, UsageAndIoErrorsExitTwo) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"bogus"}).code, 2);
  EXPECT_EQ(call({"analyze", path("missing.json")}).code, 2);
  EXPECT_EQ(call({"--format", "xml", "generate", "circle"}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST_F(Cli, VerifyPassesAndFails) {
  ASSERT_EQ(call({"--out", path("b.json"), "generate", "baseball"}).code, 0);
  ASSERT_EQ(call({"--out", path("x.json"), "generate", "cross-polytope", "--n", "6", "--closed"}).code, 0);
  const Result ok = call({"--out", path("v.json"), "verify", "appendix", path("x.json")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(nlohmann::json::parse(slurp(path("v.json"))).at("pass").get<bool>());
  // A small circle never surrounds the unit sphere.
  ASSERT_EQ(call({"--out", path("c.json"), "generate", "circle", "--radius", "0.5"}).code, 0);
  EXPECT_EQ(call({"--out", path("w.json"), "verify", "main", path("c.json")}).code, 1);
}

TEST_F(Cli, PlotWritesSvg) {
  ASSERT_EQ(call({"--out", path("b.json"), "generate", "baseball", "--per-arc", "40"}).code, 0);
  ASSERT_EQ(call({"--out", path("b.svg"), "plot", path("b.json")}).code, 0);
  const std::string svg = slurp(path("b.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST_F(Cli, CsvFormatRoundTrips) {
  ASSERT_EQ(call({"--out", path("c.csv"), "--format", "csv", "generate", "circle"}).code, 0);
  const Result r = call({"--out", path("h.csv"), "--format", "csv", "analyze", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("h.csv")).rfind("segment,horizon", 0), 0u);
}
