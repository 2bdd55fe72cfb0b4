#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "arcwidom/cli.hpp"

using namespace arcwidom;

namespace {

const std::string kData = ARCWIDOM_DATA_DIR;

RunConfig config(const std::string& command, const std::string& arc) {
  RunConfig c;
  c.command = command;
  c.arc = arc;
  return c;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(ARCWIDOM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::size_t n = 0;
  for (std::string line; std::getline(f, line);) ++n;
  return n;
}

}  // namespace

TEST(Cli, ParsesDegreeLists) {
  EXPECT_EQ(parse_degrees("1-3,10"), (std::vector<std::size_t>{1, 2, 3, 10}));
  EXPECT_EQ(parse_degrees("40"), (std::vector<std::size_t>{40}));
  EXPECT_THROW(parse_degrees("a"), InputError);
  EXPECT_THROW(parse_degrees("5-2"), InputError);
}

TEST(Cli, BadInputExitsThree) {
  auto c = config("nu", kData + "/semicircle.json");
  c.nodes = 300;
  EXPECT_EQ(run_command(c).exit_code, kExitBadInput);
  c = config("widom", kData + "/semicircle.json");
  c.nodes = 256;
  c.degrees = {10, 40};
  EXPECT_EQ(run_command(c).exit_code, kExitBadInput);
  c = config("capacity", kData + "/semicircle.json");
  c.format = "xml";
  EXPECT_EQ(run_command(c).exit_code, kExitBadInput);
  c = config("capacity", kData + "/missing.json");
  EXPECT_EQ(run_command(c).exit_code, kExitBadInput);
  c = config("nu", kData + "/semicircle.json");
  c.weight = "|z-(1,0)|^-0.6";
  EXPECT_EQ(run_command(c).exit_code, kExitBadInput);

  const auto degenerate = std::filesystem::temp_directory_path() / "arcwidom_degenerate.json";
  std::ofstream(degenerate) << R"({"kind": "segment", "A": [1, 2], "B": [1, 2]})";
  EXPECT_EQ(run_command(config("capacity", degenerate.string())).exit_code, kExitBadInput);
  std::filesystem::remove(degenerate);
}

TEST(Cli, SpiralIsUnsupported) {
  EXPECT_EQ(run_command(config("capacity", kData + "/spiral.json")).exit_code, kExitUnsupported);
  EXPECT_EQ(run_command(config("verify", kData + "/spiral.json")).exit_code, kExitUnsupported);
}

TEST(Cli, CapacityReportIsDeterministic) {
  const auto a = run_command(config("capacity", kData + "/semicircle.json"));
  const auto b = run_command(config("capacity", kData + "/semicircle.json"));
  ASSERT_EQ(a.exit_code, kExitPass);
  EXPECT_EQ(a.text, b.text);
  const auto j = nlohmann::json::parse(a.text);
  EXPECT_NEAR(j["cap_conformal"].get<double>(), std::sin(kPi / 4), 1e-12);
  EXPECT_NEAR(j["cap_oracle"].get<double>(), std::sin(kPi / 4), 1e-10);
  EXPECT_LT(j["discrepancy"].get<double>(), 1e-10);
}

TEST(Cli, NuWritesDumps) {
  const auto dir = std::filesystem::temp_directory_path() / "arcwidom_cli_test";
  std::filesystem::remove_all(dir);
  auto c = config("nu", "parabolic");
  c.out = dir.string();
  const auto out = run_command(c);
  ASSERT_EQ(out.exit_code, kExitPass);
  ASSERT_FALSE(out.verdicts.empty());
  EXPECT_EQ(out.verdicts.front(), "1 < nu <= 2: PASS");
  const auto j = nlohmann::json::parse(out.text);
  EXPECT_FALSE(j["under_resolved"].get<bool>());
  EXPECT_EQ(line_count(dir / "equilibrium.csv"), c.nodes + 1);
  EXPECT_TRUE(std::filesystem::exists(dir / "nu.json"));

  c = config("capacity", "parabolic");
  c.out = dir.string();
  c.format = "csv";
  ASSERT_EQ(run_command(c).exit_code, kExitPass);
  EXPECT_EQ(line_count(dir / "boundary.csv"), 202u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, WidomOnInterval) {
  auto c = config("widom", "interval");
  c.degrees = {2, 6};
  const auto out = run_command(c);
  ASSERT_EQ(out.exit_code, kExitPass);
  const auto j = nlohmann::json::parse(out.text);
  for (const auto& row : j["rows"]) {
    EXPECT_NEAR(row["W2sq"].get<double>(), 2.0, 1e-10);
    EXPECT_NEAR(row["Winf"].get<double>(), 2.0, 1e-3);
    EXPECT_NEAR(row["qn_ratio"].get<double>(), 2.0, 1e-6);
  }
}

TEST(Cli, VerifySingleArc) {
  auto c = config("verify", kData + "/wiggle.json");
  const auto out = run_command(c);
  EXPECT_EQ(out.exit_code, kExitPass);
  for (const auto& v : out.verdicts) EXPECT_EQ(v.rfind("PASS", 0), 0u) << v;
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(run_binary("capacity --arc " + kData + "/interval.json"), 0);
  EXPECT_EQ(run_binary("capacity --arc " + kData + "/spiral.json"), 2);
  EXPECT_EQ(run_binary("nu --arc " + kData + "/interval.json --nodes 1000"), 3);
  EXPECT_EQ(run_binary("nu --arc " + kData + "/interval.json --bogus"), 3);
  EXPECT_EQ(run_binary("widom --arc interval --degrees x"), 3);
}
