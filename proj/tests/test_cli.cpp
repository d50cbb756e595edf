// Runs the gupsim binary and checks the exit-code contract.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kBinary = GUPSIM_PATH;

int run(const std::string& args, const std::string& env = {}) {
  const std::string command = env + (env.empty() ? "" : " ") + kBinary + " " + args;
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gupsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) const {
    const auto path = dir_ / name;
    std::ofstream(path) << content;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* kFree =
    "model.kind = NonRelExact1D\nmodel.mass = 1\nmodel.beta = 0.01\n"
    "initial.x = 0\ninitial.p = 1\nrun.t_end = 1\nrun.dt = 0.01\n";

}  // namespace

TEST_F(Cli, SimulateWritesCsvAndReport) {
  const auto cfg = file("free.cfg", kFree);
  ASSERT_EQ(run("simulate --config " + cfg + " --output " + path("t.csv") + " --report " +
                path("r.json")),
            0);
  const auto report = nlohmann::json::parse(read(path("r.json")));
  EXPECT_EQ(report["trajectory"]["samples"], 101);
  EXPECT_EQ(read(path("t.csv")).substr(0, 13), "t,x,p,energy\n");
}

TEST_F(Cli, SimulateIsByteDeterministic) {
  const auto cfg = file("free.cfg", kFree);
  ASSERT_EQ(run("simulate --config " + cfg + " --output " + path("a.csv") + " --report " + path("a.json")), 0);
  ASSERT_EQ(run("simulate --config " + cfg + " --output " + path("b.csv") + " --report " + path("b.json")), 0);
  EXPECT_EQ(read(path("a.csv")), read(path("b.csv")));
  auto ra = nlohmann::json::parse(read(path("a.json")));
  auto rb = nlohmann::json::parse(read(path("b.json")));
  ra.erase("wall_time_s");
  rb.erase("wall_time_s");
  EXPECT_EQ(ra, rb);
}

TEST_F(Cli, UnitsEnvironmentOverride) {
  const auto cfg = file("free.cfg", kFree);
  ASSERT_EQ(run("simulate --config " + cfg + " --output " + path("t.csv") + " --report " + path("r.json"),
                "GUP_UNITS=SI"),
            0);
  EXPECT_EQ(nlohmann::json::parse(read(path("r.json")))["derived"]["c"], 299792458.0);
  EXPECT_EQ(run("simulate --config " + cfg + " --output " + path("t.csv"), "GUP_UNITS=imperial"), 2);
}

TEST_F(Cli, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(run("2>/dev/null"), 2);
  EXPECT_EQ(run("simulate 2>/dev/null"), 2);
  EXPECT_EQ(run("check --suite nosuch 2>/dev/null"), 2);
  EXPECT_EQ(run("simulate --config " + path("missing.cfg") + " 2>/dev/null"), 2);
  const auto conflict = file("c.cfg", "model.mass = 1\nmodel.beta = 0.01\nmodel.gamma = 0.2\n");
  EXPECT_EQ(run("simulate --config " + conflict + " 2>/dev/null"), 2);
  std::string zero_dt = kFree;
  zero_dt.replace(zero_dt.find("run.dt = 0.01"), 13, "run.dt = 0");
  const auto bad_dt = file("d.cfg", zero_dt);
  EXPECT_EQ(run("simulate --config " + bad_dt + " 2>/dev/null"), 2);
  const auto cfg = file("boost.cfg", "model.mass = 1\nmodel.beta = 0.01\nboost.law = exact\nboost.V = 1\n");
  const auto events = file("e.csv", "t,x1\n0,1\n1,zz\n");
  EXPECT_EQ(run("transform --config " + cfg + " --events " + events + " >/dev/null 2>&1"), 2);
}

TEST_F(Cli, DomainErrorsExitThree) {
  const auto cfg = file("edge.cfg",
                        "model.kind = NonRelExact1D\nmodel.mass = 1\nmodel.beta = 1\n"
                        "model.potential = uniform_field\nmodel.force = 1\ninitial.p = 0\n"
                        "run.t_end = 3\nrun.dt = 0.01\n");
  EXPECT_EQ(run("simulate --config " + cfg + " --output " + path("t.csv") + " 2>/dev/null"), 3);
  const auto fast = file("fast.cfg",
                         "model.mass = 1\nmodel.beta = 0.01\nboost.law = lorentz\nboost.V = 2\nboost.c_eff = 1\n");
  const auto events = file("e.csv", "t,x1\n0,1\n");
  EXPECT_EQ(run("transform --config " + fast + " --events " + events + " >/dev/null 2>&1"), 3);
}

TEST_F(Cli, TransformWritesEvents) {
  const auto cfg = file("lorentz.cfg",
                        "model.mass = 1\nmodel.beta = 0.01\nboost.law = lorentz\nboost.V = 0.6\nboost.c_eff = 1\n");
  const auto events = file("e.csv", "t,x1\n0,1\n");
  ASSERT_EQ(run("transform --config " + cfg + " --events " + events + " --output " + path("o.csv") +
                " --report " + path("r.json")),
            0);
  EXPECT_EQ(read(path("o.csv")), "t,x1\n0.75,1.25\n");
}

TEST_F(Cli, ConstantsReport) {
  ASSERT_EQ(run("constants > " + path("c.json")), 0);
  const auto report = nlohmann::json::parse(read(path("c.json")));
  EXPECT_NEAR(report["c_gamma"].get<double>() / 4.2e-23, 1.0, 0.02);
  EXPECT_EQ(run("constants --mass -1 2>/dev/null"), 2);
}

TEST_F(Cli, CheckExitCodeMatchesFailures) {
  ASSERT_EQ(run("check --suite constants --report " + path("r.json") + " 2>/dev/null"), 0);
  EXPECT_EQ(nlohmann::json::parse(read(path("r.json")))["failures"], 0);
  EXPECT_EQ(run("check --suite constants --tolerance-scale 0 --report " + path("z.json") + " 2>/dev/null"), 1);
  EXPECT_GT(nlohmann::json::parse(read(path("z.json")))["failures"].get<int>(), 0);
}

TEST_F(Cli, CheckFramesWithZeroToleranceFails) {
  EXPECT_EQ(run("check --suite frames --tolerance-scale 0 --report " + path("r.json") + " 2>/dev/null"), 1);
}

TEST_F(Cli, CheckReportIsSeedDeterministic) {
  ASSERT_NE(run("check --suite algebra --seed 7 --report " + path("a.json") + " 2>/dev/null"), 2);
  ASSERT_NE(run("check --suite algebra --seed 7 --report " + path("b.json") + " 2>/dev/null"), 2);
  auto a = nlohmann::json::parse(read(path("a.json")));
  auto b = nlohmann::json::parse(read(path("b.json")));
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a["seed"], 7);
}
