#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/cli.hpp"
#include "cli/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = schwartz::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rows of a 1D CSV as (x, re, im).
std::vector<std::array<double, 3>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x0,re,im");
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    std::array<double, 3> r{};
    std::stringstream ss(line);
    std::string cell;
    for (auto& v : r) {
      std::getline(ss, cell, ',');
      v = std::stod(cell);
    }
    rows.push_back(r);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("schwartz_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const json& j) {
    const auto p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p.string();
  }

  static json line_grid(std::size_t n, json extent) {
    return {{"dim", 1}, {"counts", {n}}, {"half_extents", {std::move(extent)}}};
  }
  static json derivative() {
    return {{"kind", "differential"}, {"terms", json::array({{{"index", {1}}, {"coeff", 1}}})}};
  }
  static json helmholtz() {
    return {{"kind", "differential"},
            {"terms", json::array({{{"index", {0}}, {"coeff", 1}}, {{"index", {2}}, {"coeff", -1}}})}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveDerivativeOfSine) {
  const auto cfg = config("c.json", {{"grid", line_grid(64, "pi")},
                                     {"operator", derivative()},
                                     {"datum", {{"kind", "sin"}, {"k", 1}}},
                                     {"output", {{"directory", "out"}}}});
  const auto r = run({"solve", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  double worst = 0;
  for (const auto& [x, re, im] : read_csv(dir_ / "out" / "solve.csv"))
    worst = std::max(worst, std::hypot(re + std::cos(x), im));
  EXPECT_LE(worst, 1e-10);
  const json report = json::parse(slurp(dir_ / "out" / "solve.json"));
  EXPECT_EQ(report["status"], "ok");
  EXPECT_LE(report["relative_residual"].get<double>(), 1e-10);
  EXPECT_EQ(report["grid"]["counts"][0], 64);
  EXPECT_DOUBLE_EQ(report["grid"]["dual_spacing"][0].get<double>(), 1.0);
}

TEST_F(CliTest, SolveConstantIsNotDivisible) {
  const auto cfg = config("c.json", {{"grid", line_grid(64, "pi")},
                                     {"operator", derivative()},
                                     {"datum", {{"kind", "constant"}, {"value", 1}}},
                                     {"output", {{"directory", "out"}}}});
  const auto r = run({"solve", "--config", cfg});
  EXPECT_EQ(r.code, 2);
  const json report = json::parse(slurp(dir_ / "out" / "solve.json"));
  EXPECT_EQ(report["status"], "not_divisible");
  EXPECT_EQ(report["divisibility"]["worst_index"]["p"], json::array({0.0}));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "solve.csv"));
}

TEST_F(CliTest, MalformedConfigsExitOne) {
  EXPECT_EQ(run({"solve", "--config", config("a.json", {{"grid", line_grid(7, 1.0)}})}).code, 1);
  EXPECT_EQ(run({"solve", "--config", (dir_ / "missing.json").string()}).code, 1);
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run({"solve", "--config", (dir_ / "broken.json").string()}).code, 1);
  EXPECT_EQ(run({"solve", "--config", config("b.json", {{"grid", line_grid(8, "2*pi")}})}).code, 1);
  EXPECT_EQ(run({"solve", "--config", config("c.json", {{"grid", line_grid(8, "two")},
                                                        {"operator", derivative()},
                                                        {"datum", {{"kind", "sin"}}}})})
                .code,
            1);
  EXPECT_EQ(run({"solve", "--config", config("d.json", {{"grid", line_grid(8, 1.0)},
                                                        {"operator", {{"kind", "warp"}}},
                                                        {"datum", {{"kind", "sin"}}}})})
                .code,
            1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, ExtentExpressions) {
  using schwartz::cli::parse_extent;
  EXPECT_DOUBLE_EQ(parse_extent("pi"), M_PI);
  EXPECT_DOUBLE_EQ(parse_extent("2*pi"), 2 * M_PI);
  EXPECT_DOUBLE_EQ(parse_extent("2pi"), 2 * M_PI);
  EXPECT_DOUBLE_EQ(parse_extent("pi/2"), M_PI / 2);
  EXPECT_DOUBLE_EQ(parse_extent("3.5"), 3.5);
  EXPECT_DOUBLE_EQ(parse_extent(20), 20.0);
  EXPECT_THROW(parse_extent("pie"), schwartz::cli::ConfigError);
}

TEST_F(CliTest, GreenHelmholtzKernel) {
  const auto cfg = config("c.json", {{"grid", line_grid(1024, 20)},
                                     {"operator", helmholtz()},
                                     {"output", {{"directory", "out"}}}});
  const auto r = run({"green", "--config", cfg, "--index", "0", "-5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(slurp(dir_ / "out" / "green.json"));
  EXPECT_EQ(report["construction"], "inverse");
  ASSERT_EQ(report["members"].size(), 2u);
  EXPECT_LE(report["max_weak_residual"].get<double>(), 1e-6);
  for (const auto& m : report["members"]) EXPECT_LE(m["weak_residual"].get<double>(), 1e-6);
  // Away from the kink at x = 0 the member is close to exp(-|x|)/2.
  double worst = 0;
  for (const auto& [x, re, im] : read_csv(dir_ / "out" / report["members"][0]["file"].get<std::string>())) {
    if (std::abs(x) > 10 || x == 0) continue;
    worst = std::max(worst, std::hypot(re - 0.5 * std::exp(-std::abs(x)), im));
  }
  EXPECT_LE(worst, 1e-3);
}

TEST_F(CliTest, GreenIdentityIsDeltaLike) {
  const json identity = {{"kind", "diagonal"}, {"family", "fourier"}, {"symbol", {{"kind", "constant"}, {"value", 1}}}};
  const auto cfg = config("c.json", {{"grid", line_grid(64, 4.0)},
                                     {"operator", identity},
                                     {"output", {{"directory", "out"}}}});
  const auto r = run({"green", "--config", cfg, "--index", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(slurp(dir_ / "out" / "green.json"));
  EXPECT_LE(report["members"][0]["weak_residual"].get<double>(), 1e-8);
  const auto rows = read_csv(dir_ / "out" / report["members"][0]["file"].get<std::string>());
  const double dx = 8.0 / 64;
  for (const auto& [x, re, im] : rows)
    EXPECT_NEAR(std::hypot(re - (std::abs(x - 1) < 1e-12 ? 1 / dx : 0.0), im), 0.0, 1e-10) << x;
}

TEST_F(CliTest, GreenDerivativeExitsTwo) {
  const auto cfg = config("c.json", {{"grid", line_grid(64, "pi")},
                                     {"operator", derivative()},
                                     {"output", {{"directory", "out"}}}});
  const auto r = run({"green", "--config", cfg, "--index", "0"});
  EXPECT_EQ(r.code, 2);
  const json report = json::parse(slurp(dir_ / "out" / "green.json"));
  EXPECT_EQ(report["invertibility"]["invertible"], false);
  EXPECT_EQ(report["divisibility"]["divisible"], false);
  EXPECT_EQ(report["invertibility"]["worst_index"]["p"], json::array({0.0}));
}

TEST_F(CliTest, GreenOffGridIndexIsConfigError) {
  const auto cfg = config("c.json", {{"grid", line_grid(64, "pi")}, {"operator", helmholtz()}});
  EXPECT_EQ(run({"green", "--config", cfg, "--index", "0.01"}).code, 1);
  EXPECT_EQ(run({"green", "--config", cfg, "--index", "0,0"}).code, 1);
}

TEST_F(CliTest, ExpandUnitSymbolReturnsDatum) {
  const json identity = {{"kind", "diagonal"}, {"family", "fourier"}, {"symbol", {{"kind", "constant"}, {"value", 1}}}};
  const auto cfg = config("c.json", {{"grid", line_grid(128, 8.0)},
                                     {"operator", identity},
                                     {"datum", {{"kind", "gaussian"}, {"sigma", 0.7}, {"center", 0.5}}},
                                     {"output", {{"directory", "out"}}}});
  ASSERT_EQ(run({"expand", "--config", cfg}).code, 0);
  double worst = 0;
  for (const auto& [x, re, im] : read_csv(dir_ / "out" / "expand_image.csv"))
    worst = std::max(worst, std::hypot(re - std::exp(-(x - 0.5) * (x - 0.5) / (2 * 0.49)), im));
  EXPECT_LE(worst, 1e-10);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "expand_coordinates.csv"));
}

TEST_F(CliTest, ExpandDiracBasisMultiplies) {
  const json op = {{"kind", "multiplication"},
                   {"symbol", {{"kind", "polynomial"},
                               {"terms", json::array({{{"index", {0}}, {"coeff", 1}}, {{"index", {2}}, {"coeff", 1}}})}}}};
  const auto cfg = config("c.json", {{"grid", line_grid(32, 2.0)},
                                     {"operator", op},
                                     {"datum", {{"kind", "cos"}, {"k", 2}}},
                                     {"output", {{"directory", "out"}}}});
  ASSERT_EQ(run({"expand", "--config", cfg}).code, 0);
  for (const auto& [x, re, im] : read_csv(dir_ / "out" / "expand_image.csv")) {
    EXPECT_NEAR(re, (1 + x * x) * std::cos(2 * x), 1e-14);
    EXPECT_EQ(im, 0.0);
  }
}

TEST_F(CliTest, ExpandZeroDatumGivesZero) {
  const auto cfg = config("c.json", {{"grid", line_grid(32, 2.0)},
                                     {"operator", helmholtz()},
                                     {"datum", {{"kind", "constant"}, {"value", 0}}},
                                     {"output", {{"directory", "out"}}}});
  ASSERT_EQ(run({"expand", "--config", cfg}).code, 0);
  for (const auto& [x, re, im] : read_csv(dir_ / "out" / "expand_image.csv")) EXPECT_EQ(std::hypot(re, im), 0.0);
  for (const auto& [x, re, im] : read_csv(dir_ / "out" / "expand_coordinates.csv")) EXPECT_EQ(std::hypot(re, im), 0.0);
}

TEST_F(CliTest, SolveOutputsAreByteIdenticalAcrossRuns) {
  const auto cfg = config("c.json", {{"grid", line_grid(128, 8.0)},
                                     {"operator", helmholtz()},
                                     {"datum", {{"kind", "gaussian"}, {"sigma", 0.5}}},
                                     {"output", {{"directory", "out"}}}});
  ASSERT_EQ(run({"solve", "--config", cfg}).code, 0);
  const auto csv = slurp(dir_ / "out" / "solve.csv"), rep = slurp(dir_ / "out" / "solve.json");
  ASSERT_EQ(run({"solve", "--config", cfg}).code, 0);
  EXPECT_EQ(csv, slurp(dir_ / "out" / "solve.csv"));
  EXPECT_EQ(rep, slurp(dir_ / "out" / "solve.json"));
}

TEST_F(CliTest, FileDatumRoundTrip) {
  const auto first = config("a.json", {{"grid", line_grid(64, "pi")},
                                       {"operator", helmholtz()},
                                       {"datum", {{"kind", "cos"}, {"k", 3}}},
                                       {"output", {{"directory", "a"}}}});
  ASSERT_EQ(run({"solve", "--config", first}).code, 0);
  // (I - d^2) applied to the solution through a file datum gives back cos 3x.
  const auto second = config("b.json", {{"grid", line_grid(64, "pi")},
                                        {"operator", helmholtz()},
                                        {"datum", {{"kind", "file"}, {"path", "a/solve.csv"}}},
                                        {"output", {{"directory", "b"}}}});
  ASSERT_EQ(run({"expand", "--config", second}).code, 0);
  for (const auto& [x, re, im] : read_csv(dir_ / "b" / "expand_image.csv"))
    EXPECT_NEAR(std::hypot(re - std::cos(3 * x), im), 0.0, 1e-12);
  const auto wrong = config("c.json", {{"grid", line_grid(32, "pi")},
                                       {"operator", helmholtz()},
                                       {"datum", {{"kind", "file"}, {"path", "a/solve.csv"}}}});
  EXPECT_EQ(run({"expand", "--config", wrong}).code, 1);
}

TEST_F(CliTest, TwoDimensionalDeltaSolve) {
  const json grid = {{"dim", 2}, {"counts", {16, 16}}, {"half_extents", {"pi", "pi"}}};
  const json op = {{"kind", "differential"},
                   {"terms", json::array({{{"index", {0, 0}}, {"coeff", 1}},
                                          {{"index", {2, 0}}, {"coeff", -1}},
                                          {{"index", {0, 2}}, {"coeff", -1}}})}};
  const auto cfg = config("c.json", {{"grid", grid},
                                     {"operator", op},
                                     {"datum", {{"kind", "delta"}, {"point", {0, 0}}}},
                                     {"output", {{"directory", "out"}}}});
  ASSERT_EQ(run({"solve", "--config", cfg}).code, 0);
  std::ifstream in(dir_ / "out" / "solve.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x0,x1,re,im");
}

TEST_F(CliTest, VerifySuites) {
  const auto ok = run({"verify", "identity"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("PASS"), std::string::npos);
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(run({"verify", "nonsense"}).code, 1);
}

TEST_F(CliTest, VerifyAllIsDeterministic) {
  ::setenv("SCHWARTZ_SEED", "42", 1);
  const auto a = run({"verify", "all", "--json", (dir_ / "a.json").string()});
  const auto b = run({"verify", "all", "--json", (dir_ / "b.json").string()});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  ::setenv("SCHWARTZ_SEED", "not-a-number", 1);
  EXPECT_EQ(run({"verify", "all"}).code, 1);
  ::unsetenv("SCHWARTZ_SEED");
}
