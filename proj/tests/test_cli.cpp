#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cvxbound/cli.hpp"

using namespace cvxbound;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cvxbound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json run_json(const std::vector<std::string>& args) {
  const auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

class SeedEnvGuard {
 public:
  SeedEnvGuard() { unsetenv(kSeedEnv); }
  ~SeedEnvGuard() { unsetenv(kSeedEnv); }
};

}  // namespace

TEST(Cli, EntropyLogConcaveExample) {
  const auto j = run_json({"bounds", "--functional", "entropy", "--family", "log-concave", "-n", "1", "--fmax", "1"});
  const auto& r = j["results"][0];
  EXPECT_EQ(r["lower"].get<double>(), 0.0);
  EXPECT_EQ(r["upper"].get<double>(), 1.0);
  EXPECT_EQ(r["evidence"], "proved");
}

TEST(Cli, RenyiExample) {
  const auto j = run_json({"bounds", "--functional", "renyi", "--alpha", "2", "--family", "beta-concave", "--beta", "4"});
  const auto& h = j["results"][0]["renyi_entropy"];
  EXPECT_NEAR(h["lower"].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(h["upper"].get<double>(), std::log(7.0 / 3.0), 1e-14);
}

TEST(Cli, TruncationExample) {
  const auto j = run_json({"bounds", "--functional", "truncation", "--t", "0.25", "--family", "beta-concave", "--beta", "2"});
  EXPECT_NEAR(j["results"][0]["upper"].get<double>(), 0.75, 1e-14);
}

TEST(Cli, EnvelopeKeys) {
  const auto j = run_json({"bounds"});
  for (const char* key : {"command", "config_echo", "results", "properties", "diagnostics", "versions"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["command"], "bounds");
  EXPECT_TRUE(j["versions"].contains("cvxbound"));
}

TEST(Cli, BitsScaleEntropyFields) {
  const auto j = run_json({"bounds", "--bits"});
  EXPECT_NEAR(j["results"][0]["upper"].get<double>(), 1.0 / std::log(2.0), 1e-14);
  EXPECT_EQ(j["config_echo"]["units"], "bits");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"bounds", "--family", "beta-concave", "--beta", "1", "-n", "1"}).code, kExitInvalidInput);
  EXPECT_EQ(run({"bounds", "--functional", "renyi", "--alpha", "1"}).code, kExitInvalidInput);
  EXPECT_EQ(run({"bounds", "--bogus"}).code, kExitInvalidInput);
  EXPECT_EQ(run({"bounds", "--fmax", "-1"}).code, kExitInvalidInput);
  EXPECT_EQ(run({"common-info", "--model", "mvt", "--nu", "4", "-n", "2"}).code, kExitInvalidInput);
  EXPECT_EQ(run({"table", "--family", "beta-concave", "--betas", "0.5"}).code, kExitInvalidInput);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, TextAndCsvFormats) {
  const auto text = run({"bounds", "--format", "text"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("upper      1\n"), std::string::npos) << text.out;
  const auto csv = run({"bounds", "--format", "csv"});
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')).find("functional"), 0u);
}

TEST(Cli, TableSweepsBeta) {
  const auto r = run({"table", "--family", "beta-concave", "--betas", "3:6", "-n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.find("functional,family,n,beta,alpha,t,f_max,lower,upper,gap"), 0u) << line;
  int rows = 0;
  double previous_gap = 1e300;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const double gap = std::stod(cells.at(9));
    EXPECT_LT(gap, previous_gap);
    previous_gap = gap;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Cli, ConfigFileAndPrecedence) {
  SeedEnvGuard guard;
  const auto path = std::filesystem::temp_directory_path() / "cvxbound_cli_test.ini";
  {
    std::ofstream f(path);
    f << "functional = \"renyi\"\nalpha = 3\nfmax = 2\nseed = 99\n";
  }
  auto j = run_json({"bounds", "--config", path.string()});
  EXPECT_EQ(j["config_echo"]["functional"], "renyi");
  EXPECT_EQ(j["config_echo"]["alpha"].get<double>(), 3.0);
  EXPECT_EQ(j["config_echo"]["seed"].get<std::uint64_t>(), 99u);
  j = run_json({"bounds", "--config", path.string(), "--alpha", "0.5"});
  EXPECT_EQ(j["config_echo"]["alpha"].get<double>(), 0.5);
  EXPECT_EQ(j["config_echo"]["fmax"].get<double>(), 2.0);

  setenv(kSeedEnv, "7", 1);
  j = run_json({"bounds"});
  EXPECT_EQ(j["config_echo"]["seed"].get<std::uint64_t>(), 7u);
  j = run_json({"bounds", "--config", path.string()});
  EXPECT_EQ(j["config_echo"]["seed"].get<std::uint64_t>(), 99u);
  j = run_json({"bounds", "--seed", "5"});
  EXPECT_EQ(j["config_echo"]["seed"].get<std::uint64_t>(), 5u);
  std::filesystem::remove(path);
}

TEST(Cli, CommonInfoGaussian) {
  const auto j = run_json({"common-info", "--model", "gaussian", "-n", "2", "--rho", "0.5"});
  const auto& r = j["results"][0];
  EXPECT_NEAR(r["i_d"]["value"].get<double>(), -0.5 * std::log(0.75), 1e-6);
  EXPECT_EQ(r["mode"], "beta-to-infinity heuristic");
  EXPECT_NEAR(r["gap"].get<double>(), 35.725887222397816, 1e-12);
}

TEST(Cli, CommonInfoIsDeterministic) {
  const std::vector<std::string> args{"common-info", "--model", "mvt", "--nu", "6", "-n", "2", "--rho", "0.3",
                                      "--method", "monte-carlo", "--samples", "20000", "--workers", "3", "--seed", "4"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyInjectedViolationIsExpectedFailure) {
  const auto r = run({"verify", "--suites", "configured", "--inject-violation", "A-minus-epsilon", "--epsilon", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  bool found = false;
  for (const auto& p : j["properties"]) {
    if (p["expected_fail"].get<bool>()) {
      found = true;
      EXPECT_TRUE(p["pass"].get<bool>());
      EXPECT_NEAR(p["margin"].get<double>(), 0.05, 1e-6);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, VerifyQuickSuitesPass) {
  const auto r = run({"verify", "--suites", "identities,limits,counterexamples", "--functional", "entropy"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const auto j = Json::parse(r.out);
  EXPECT_GE(j["properties"].size(), 3u);
  for (const auto& p : j["properties"]) EXPECT_TRUE(p["pass"].get<bool>()) << p["name"];
}
