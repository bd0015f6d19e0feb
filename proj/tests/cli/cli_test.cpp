#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(OAR_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("oar_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string at(const std::string& name) const { return (dir / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
  fs::path dir;
};

TEST_F(Cli, SolveTwoPins) {
  write("two.txt", "bounds 0 0 10 10\npins 2\n1 1\n7 4\nobstacles 0\n");
  const CliRun r = run("solve " + at("two.txt") + " --svg " + at("two.svg") + " --json " + at("two.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["case"], "two");
  EXPECT_EQ(j["wirelength"], 9);
  EXPECT_EQ(j["legal"], true);
  EXPECT_EQ(j["pins"], 2);
  EXPECT_EQ(j["obstacles"], 0);
  EXPECT_TRUE(j["runtime_ms"].is_number());
  EXPECT_TRUE(fs::exists(dir / "two.svg"));
  EXPECT_TRUE(fs::exists(dir / "two.json"));
}

TEST_F(Cli, MalformedFileExitsTwo) {
  write("bad.txt", "bounds 0 0 10 10\npins 2\n1 1\n7 x\nobstacles 0\n");
  const std::string cmd = std::string(OAR_CLI) + " solve " + at("bad.txt") + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::array<char, 512> buf{};
  std::string msg;
  while (fgets(buf.data(), int(buf.size()), p)) msg += buf.data();
  const int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_EQ(run("solve " + at("missing.txt")).code, 2);
  EXPECT_EQ(run("solve " + at("bad.txt") + " --all-obstacles --bbox-only").code, 2);
}

TEST_F(Cli, GenIsDeterministic) {
  const std::string flags = " --pins 10 --obstacles 10 --density 0.10 --seed 5 --count 3 --bounds 0,0,200,200";
  ASSERT_EQ(run("gen" + flags + " --out " + at("a")).code, 0);
  ASSERT_EQ(run("gen" + flags + " --out " + at("b")).code, 0);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir / "a")) names.push_back(e.path().filename().string());
  ASSERT_EQ(names.size(), 3u);
  for (const auto& n : names) EXPECT_EQ(slurp(dir / "a" / n), slurp(dir / "b" / n)) << n;
}

TEST_F(Cli, GenCountZeroWritesNothing) {
  ASSERT_EQ(run("gen --pins 10 --obstacles 10 --density 0.1 --count 0 --out " + at("z")).code, 0);
  EXPECT_TRUE(!fs::exists(dir / "z") || fs::is_empty(dir / "z"));
  EXPECT_NE(run("gen --pins 10 --obstacles 10 --density 0 --out " + at("z")).code, 0);
}

TEST_F(Cli, BenchOnEmptyDirIsHeaderOnly) {
  fs::create_directories(dir / "empty");
  const CliRun r = run("bench " + at("empty"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "case,pins,obstacles,wirelength,runtime_ms,legal,oracle_ratio\n");
}

TEST_F(Cli, BenchRowsAndOracleRatio) {
  ASSERT_EQ(run("gen --pins 4 --obstacles 2 --density 0.1 --bounds 0,0,12,12 --count 3 --out " + at("small")).code, 0);
  const CliRun r = run("bench " + at("small"));
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",true,"), std::string::npos) << line;
    const double ratio = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_GE(ratio, 1.0);
  }
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, OracleSubcommand) {
  write("d.txt", "bounds -5 -5 5 10\npins 2\n0 5\n0 0\nobstacles 1\n-2 2 1 3\n");
  const CliRun r = run("oracle " + at("d.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["optimal_wirelength"], 7);
}

TEST_F(Cli, RouteMetricsSchemaAndStageSum) {
  ASSERT_EQ(run("gen-design --seed 3 --nx 32 --ny 32 --out " + at("d")).code, 0);
  std::string design;
  for (const auto& e : fs::directory_iterator(dir / "d")) design = e.path().string();
  ASSERT_FALSE(design.empty());
  const CliRun r = run("route " + design + " --metrics-out " + at("m.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(dir / "m.json"));
  for (const char* k : {"design", "nets", "initial", "final", "iterations", "converged", "stages", "runtime_ms"})
    EXPECT_TRUE(j.contains(k)) << k;
  for (const char* k : {"WL", "vias", "OW", "OV", "cost"})
    EXPECT_TRUE(j["final"].contains(k)) << k;
  EXPECT_EQ(j["final"]["OV"], 0);
  double sum = 0;
  for (const auto& s : j["stages"]) sum += s["runtime_ms"].get<double>();
  const double total = j["runtime_ms"].get<double>();
  EXPECT_NEAR(sum, total, 0.01 * total + 1e-3);

  ASSERT_EQ(run("route " + design + " --no-timing --metrics-out " + at("m1.json")).code, 0);
  ASSERT_EQ(run("route " + design + " --no-timing --metrics-out " + at("m2.json")).code, 0);
  EXPECT_EQ(slurp(dir / "m1.json"), slurp(dir / "m2.json"));
  EXPECT_FALSE(nlohmann::json::parse(slurp(dir / "m1.json")).contains("runtime_ms"));
}

TEST_F(Cli, UnknownSubcommandFails) { EXPECT_NE(run("frobnicate").code, 0); }

}  // namespace
