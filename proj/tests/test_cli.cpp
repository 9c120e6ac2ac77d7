#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfid/commands.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qfid::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qfid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

TEST_F(Cli, QuenchWritesThreeTables) {
  const CliResult r = run({"quench", "--gamma-i", "-2,0.8", "--gamma-f", "0,-2", "-L", "30",
                     "--t-samples", "21", "-o", out("q"), "--format", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* stem : {"loschmidt", "modes", "summary"}) {
    EXPECT_TRUE(fs::exists(dir_ / "q" / (std::string(stem) + ".csv")));
    EXPECT_TRUE(fs::exists(dir_ / "q" / (std::string(stem) + ".json")));
  }
  const std::string summary = slurp(dir_ / "q" / "summary.csv");
  EXPECT_NE(summary.find("xy,-2 0.8,0 -2,30,finite,ok,1,1,1,true"), std::string::npos)
      << summary;
}

TEST_F(Cli, ValidationFailureWritesNothing) {
  const CliResult r = run({"quench", "--gamma-i", "-2,0.8", "--gamma-f", "0,-2", "-L", "31", "-o",
                     out("bad")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("system.size"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "bad"));
}

TEST_F(Cli, UnknownFlagAndMissingFieldAreValidationErrors) {
  EXPECT_EQ(run({"quench", "--frobnicate"}).code, 2);
  EXPECT_EQ(run({"quench", "--gamma-i", "-2,0.8", "-L", "30", "-o", out("m")}).code, 2);
  EXPECT_EQ(run({"scan", "--gamma-i", "-2,0.8", "--axis1", "h:-1:1:3", "-o", out("m")}).code, 2);
  EXPECT_EQ(run({"modes", "--gamma-i", "1,2,3", "--gamma-f", "0,1", "-o", out("m")}).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "m"));
}

TEST_F(Cli, ComputationFailureExitsOne) {
  // eta = 0, h = 0 closes the gap at k = pi/2, which lies on the L = 8 grid.
  const CliResult r = run({"quench", "--gamma-i", "-2,0.8", "--gamma-f", "0,0", "-L", "8", "-o",
                     out("gap")});
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "gap"));
}

TEST_F(Cli, ConfigFileWithOverride) {
  fs::create_directories(dir_);
  const fs::path cfg = dir_ / "run.yaml";
  std::ofstream(cfg) << "model: xy\ngamma_i: {h: -2, eta: 0.8}\ngamma_f: [-1.1, -2]\n";
  const CliResult r = run({"modes", "-c", cfg.string(), "-o", out("modes")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string counts = slurp(dir_ / "modes" / "mode_counts.csv");
  EXPECT_EQ(counts.substr(counts.find("\r\n") + 2, 10), "2,0,2,true");

  std::ofstream(cfg) << "model: xy\ngamma_i: {h: -2, eta: 0.8}\nsurprise: 1\n";
  const CliResult bad = run({"modes", "-c", cfg.string(), "--gamma-f", "0,1"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;
}

TEST_F(Cli, ScanOfOneCellMatchesQuenchSummary) {
  ASSERT_EQ(run({"scan", "--gamma-i", "-2,0.8", "--axis1", "h:0.4:0.4:1", "--axis2",
                 "eta:-1.5:-1.5:1", "-L", "30", "-o", out("s")})
                .code,
            0);
  ASSERT_EQ(run({"quench", "--gamma-i", "-2,0.8", "--gamma-f", "0.4,-1.5", "-L", "30", "-o",
                 out("s1")})
                .code,
            0);
  const std::string scan = slurp(dir_ / "s" / "scan.csv");
  const std::string summary = slurp(dir_ / "s1" / "summary.csv");
  const auto tail = [](const std::string& csv, int skip) {
    std::string row = csv.substr(csv.find("\r\n") + 2);
    for (int i = 0; i < skip; ++i) row = row.substr(row.find(',') + 1);
    return row;
  };
  EXPECT_EQ(tail(scan, 2), tail(summary, 5));
}

TEST_F(Cli, IdenticalQuenchHasZeroRate) {
  ASSERT_EQ(run({"quench", "--gamma-i", "-2,0.8", "--gamma-f", "-2,0.8", "-L", "20",
                 "--t-samples", "5", "--format", "json", "-o", out("id")})
                .code,
            0);
  const auto rows = nlohmann::json::parse(slurp(dir_ / "id" / "loschmidt.json"));
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_EQ(row["lambda"].get<double>(), 0.0);
    EXPECT_EQ(row["echo"].get<double>(), 1.0);
  }
}

TEST_F(Cli, OutputIsDeterministic) {
  const std::vector<std::string> base{"scan", "--gamma-i", "-2,0.8", "--axis1", "h:-3:3:7",
                                      "--axis2", "eta:-3:3:5", "--thermodynamic"};
  auto a = base, b = base;
  a.insert(a.end(), {"-o", out("a")});
  b.insert(b.end(), {"-o", out("b")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "scan.csv"), slurp(dir_ / "b" / "scan.csv"));
}

TEST_F(Cli, VerifyPassesAndInjectedFaultFails) {
  const CliResult ok = run({"verify", "--trials", "30", "-o", out("v")});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("all properties passed"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "v" / "verify_report.csv"));
  const CliResult bad = run({"verify", "--trials", "30", "--inject-fault", "-o", out("vf")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL relation_identity"), std::string::npos) << bad.out;
}

TEST_F(Cli, XYDemoSmallGrid) {
  const CliResult r = run({"xy-demo", "--grid", "11", "--line-samples", "13", "--k-samples", "9",
                     "-o", out("demo")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* stem : {"fig1_equilibrium_phases", "fig2a_kc_lines", "fig2b_fig4bc_region_map",
                           "fig3bc_lbar_rate", "fig5bc_alpha_rate", "fig6be_cases"}) {
    EXPECT_TRUE(fs::exists(dir_ / "demo" / (std::string(stem) + ".csv"))) << stem;
  }
}

}  // namespace
