#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("crnkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(CRNKIT_CLI) + " --out-dir " + dir_.string() + " " +
                            args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
  }

  static std::string model(const char* name) { return std::string(CRNKIT_MODELS) + "/" + name; }

  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, DecideExitCodes) {
  CliResult r = run("decide " + model("ex33.crn") + " --input \"3X + 3Y\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["kind"], "Accept");
  EXPECT_EQ(run("decide " + model("ex33.crn") + " --input \"3X + 2Y\"").code, 1);
  EXPECT_EQ(run("decide " + model("ex33.crn") + " --input 0").code, 3);
  EXPECT_EQ(run("decide " + model("grow.crn") + " --mode output --input 0 --bound 10").code, 5);
}

TEST_F(Cli, ParseErrorsExitTwo) {
  std::ofstream(dir_ / "bad.crn") << "A -> -> B\n";
  EXPECT_EQ(run("parse " + (dir_ / "bad.crn").string()).code, 2);
  EXPECT_EQ(run("parse " + model("max.crn")).code, 0);
  EXPECT_EQ(run("frobnicate").code, 3);
}

TEST_F(Cli, SimulateSsaIsSeedReproducible) {
  std::ofstream(dir_ / "noinit.crn") << "A -> B\n";
  EXPECT_EQ(run("simulate " + (dir_ / "noinit.crn").string()).code, 3);
  ASSERT_EQ(run("--seed 5 simulate " + model("ex33.crn") + " --runs 4").code, 0);
  const std::string first = read("ex33_run3.csv");
  ASSERT_EQ(run("--seed 5 --jobs 1 simulate " + model("ex33.crn") + " --runs 4").code, 0);
  EXPECT_EQ(read("ex33_run3.csv"), first);
  const auto manifest = nlohmann::json::parse(read("manifest.json"));
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["outputs"].size(), 5u);
  EXPECT_EQ(manifest["inputs"][0]["fnv1a64"].get<std::string>().size(), 16u);
}

TEST_F(Cli, SimulateOdeConvergesToMin) {
  ASSERT_EQ(run("simulate --mode ode " + model("min.crn") + " --t 50").code, 0);
  const std::string csv = read("min_ode.csv");
  const std::string last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
  double t, x, y, z;
  char sep;
  std::istringstream(last) >> t >> sep >> x >> sep >> y >> sep >> z;
  EXPECT_EQ(t, 50);
  EXPECT_NEAR(z, 3.0, 1e-6);
  EXPECT_NEAR(y, 2.0, 1e-6);
}

TEST_F(Cli, CompileCaHasClockChain) {
  CliResult r = run("compile --from ca " + model("double.ca") + " --l 8");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["clock_reactions"], 14);
  const std::string crn = read("double_l8.crn");
  EXPECT_EQ(crn.rfind("% generated by crnkit", 0), 0u);
  EXPECT_NE(crn.find("D + T7 -> D + T8"), std::string::npos);
}

TEST_F(Cli, CompilePredicateAndDsd) {
  ASSERT_EQ(run("compile --from predicate \"mod(1,-1;0;3)\"").code, 0);
  const std::string atom = read("atom0.crn");
  EXPECT_NE(atom.find("#vote1"), std::string::npos);
  std::ofstream(dir_ / "p.crn") << atom;
  EXPECT_EQ(run("decide " + (dir_ / "p.crn").string() + " --input \"4X1 + X2\"").code, 0);
  EXPECT_EQ(run("decide " + (dir_ / "p.crn").string() + " --input \"2X1 + X2\"").code, 1);

  ASSERT_EQ(run("compile --from dsd " + model("ab_c.crn") + " --fuel 100").code, 0);
  const auto j = nlohmann::json::parse(read("ab_c_dsd.json"));
  EXPECT_EQ(j["groups"].size(), 1u);
  EXPECT_NE(read("ab_c_dsd.crn").find("#init 3A + 2B + 100L_a0 + 100T_a0"), std::string::npos);
}

TEST_F(Cli, Checks) {
  CliResult c = run("check --what conservation " + model("majority.crn"));
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(nlohmann::json::parse(c.out)["conservation"], nlohmann::json({1, 1, 1}));
  CliResult s = run("check --what speedfault " + model("existence.crn") + " --k 1");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(nlohmann::json::parse(s.out)["summary"], "none found");
  CliResult co = run("--seed 3 check --what cosim " + model("ab_c.crn") + " --runs 10");
  EXPECT_EQ(co.code, 0);
  EXPECT_EQ(co.out.rfind("PASS", 0), 0u);
}

TEST_F(Cli, ReachFormats) {
  CliResult r = run("reach " + model("ex33.crn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(read("ex33_reach.json"))["truncated"], false);
  EXPECT_EQ(run("--format dot reach " + model("ex33.crn")).code, 0);
  EXPECT_NE(read("ex33_reach.dot").find("digraph"), std::string::npos);
  EXPECT_EQ(run("reach " + model("grow.crn") + " --bound 5").code, 5);
  CliResult seg = run("reach " + model("min.crn") + " --target \"Y + 2Z\" --init \"2X + 3Y\"");
  EXPECT_EQ(seg.code, 0);
  EXPECT_EQ(nlohmann::json::parse(seg.out)["segments"][0]["flux"]["r0"], "2");
}
