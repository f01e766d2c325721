#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "piih/asympt.hpp"
#include "piih/io.hpp"

using namespace piih;

namespace {

struct Run {
  int status;
  std::string out;
};

Run piih_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + PIIH_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("piih_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, CsvFormat) {
  std::ostringstream os;
  io::write_csv(os, {"x", "value"}, {{0.1, -2.0}});
  EXPECT_EQ(os.str(), "x,value\r\n0.10000000000000001,-2\r\n");
  EXPECT_THROW(io::write_csv(os, {"x"}, {{1.0, 2.0}}), DomainError);
}

TEST(Io, AlgElemRoundTrip) {
  const AlgElem x = AlgElem::beta_power(2, 2) * make_rational(-1, 54);
  const auto j = io::to_json(x);
  EXPECT_EQ(j.dump(), R"({"coeffs":["0","0","-1/54","0"],"n":2})");
  EXPECT_EQ(io::alg_from_json(j), x);
}

TEST(Io, SeriesJson) {
  const auto j = io::to_json(largegap_series(1, {}), true);
  EXPECT_EQ(j["terms"][0]["exponent"], "3");
  EXPECT_EQ(j["terms"][0]["coefficient"]["coeffs"][0], "-1/12");
  EXPECT_NEAR(j["terms"][0]["value"].get<double>(), -1.0 / 12.0, 1e-17);
  EXPECT_EQ(j["log_coefficient"], "-1/8");
  EXPECT_EQ(j["constant"]["name"], "logC");
}

TEST(Io, Ranges) {
  EXPECT_EQ(io::parse_range("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(io::parse_range("-1:-1:1").size(), 1u);
  for (const char* bad : {"0:1", "0:1:0", "1:0:0.1", "a:1:0.1", "0:1:0.1x"}) EXPECT_THROW(io::parse_range(bad), UsageError) << bad;
}

TEST(Cli, HierarchyText) {
  auto r = piih_cli("hierarchy --n 2 --tau 1 --format text");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "q'''' - 10*q*q'^2 - 10*q^2*q'' + 6*q^5 + 1*(q'' - 2*q^3) - s*q + alpha = 0\n");
}

TEST(Cli, HierarchyJson) {
  auto r = piih_cli("hierarchy --n 1 --alpha 1/2 --format json");
  ASSERT_EQ(r.status, 0);
  auto j = io::json::parse(r.out);
  EXPECT_EQ(j["alpha"], "1/2");
  EXPECT_EQ(j["n"], 1);
}

TEST(Cli, AsymptFirstMember) {
  auto r = piih_cli("asympt --n 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "logF ~ -(1/12)*|s|^3 - (1/8)*log|s| + logC[fitted]\n");
}

TEST(Cli, VerifyExact) {
  auto r = piih_cli("verify --suite exact");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("A1 PASS"), std::string::npos);
  EXPECT_NE(r.out.find("A3 PASS"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(piih_cli("").status, 2);
  EXPECT_EQ(piih_cli("fredholm --n 1 --s 1:0:1").status, 2);
  EXPECT_EQ(piih_cli("hierarchy --n 2 --tau 1,2").status, 2);
  EXPECT_EQ(piih_cli("asympt --n 1 --bogus").status, 2);
  EXPECT_EQ(piih_cli("fredholm --n 1").status, 2);
  EXPECT_EQ(piih_cli("verify --suite nope").status, 2);
}

TEST(Cli, NumericFailureExitsOne) {
  // rho = 0 passes the flag range but is rejected by the model
  EXPECT_EQ(piih_cli("fredholm --n 1 --rho 0 --s 0:0.1:0.05").status, 1);
}

TEST(Cli, AigenCsv) {
  auto r = piih_cli("aigen --n 1 --x 0:0.5:0.25");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("x,value,err_estimate\r\n0,0.355028053887817", 0), 0u) << r.out;
}

TEST(Cli, FredholmDeterministic) {
  const std::string args = "fredholm --n 2 --tau 1/2 --s -1:-0.9:0.05 --nodes 40";
  auto a = piih_cli(args), b = piih_cli(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("s,logF,dlogF,q2,q,err\r\n", 0), 0u);
}

TEST(Cli, ConfigMergedUnderFlags) {
  const auto cfg = scratch("c.json");
  std::ofstream(cfg) << R"({"n": 2, "tau": ["1"], "asympt": {"series": "q", "depth": 2}})";
  auto from_file = piih_cli("--config " + cfg.string() + " asympt");
  ASSERT_EQ(from_file.status, 0);
  EXPECT_EQ(from_file.out.rfind("q ~ ", 0), 0u);
  auto flag_wins = piih_cli("--config " + cfg.string() + " asympt --series largegap");
  EXPECT_EQ(flag_wins.out.rfind("logF ~ ", 0), 0u);
  std::ofstream(cfg) << R"({"asympt": {"unknown": 1}})";
  EXPECT_EQ(piih_cli("--config " + cfg.string() + " asympt").status, 2);
}

TEST(Cli, OutputDirFromEnvironment) {
  const auto dir = scratch("out");
  std::filesystem::create_directories(dir);
  auto r = piih_cli("asympt --n 1 --out series.txt", "PIIH_OUTPUT_DIR=" + dir.string());
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(dir / "series.txt");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "logF ~ -(1/12)*|s|^3 - (1/8)*log|s| + logC[fitted]");
}
