// Copyright 2026 The Shiftlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shiftlab/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace shiftlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("shiftlab_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CliTest, TightnessGoldenRun) {
  const Outcome o = RunCli({"tightness", "--L", "1", "--h", "0.1", "--N", "2",
                            "--q", "2", "--v", "1"});
  ASSERT_EQ(o.code, kExitPass) << o.err;
  const json r = o.report();
  EXPECT_EQ(r["command"], "tightness");
  EXPECT_EQ(r["version"], kVersion);
  ASSERT_EQ(r["checks"].size(), 1u);
  EXPECT_NEAR(r["checks"][0]["lhs"].get<double>(), 2.76243093922651933, 1e-13);
  EXPECT_NEAR(r["checks"][0]["rhs"].get<double>(), 2.76243093922651933, 1e-13);
  EXPECT_TRUE(r["checks"][0]["pass"].get<bool>());
  for (const char* key : {"checks", "command", "params", "seed", "version"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
}

TEST(CliTest, ScheduleGoldenRunWritesCsv) {
  const fs::path dir = TempDir("schedule");
  const Outcome o = RunCli({"--out", dir.string(), "schedule", "--c1", "1",
                            "--c2", "2", "--N", "2"});
  ASSERT_EQ(o.code, kExitPass) << o.err;
  EXPECT_NEAR(o.report()["details"]["cost"].get<double>(), 3.2, 1e-15);
  EXPECT_EQ(ReadFile(dir / "schedule.csv"),
            "n,a\n0,0\n1,0.40000000000000002\n2,1\n");
  EXPECT_EQ(ReadFile(dir / "report.json"), o.out);
  fs::remove_all(dir);
}

TEST(CliTest, FpverifyGoldenRun) {
  const Outcome o = RunCli({"fpverify", "--potential", "x^2/2", "--beta", "1",
                            "--t", "1", "--v", "0.5", "--q", "1"});
  ASSERT_EQ(o.code, kExitPass) << o.err;
  const json c = o.report()["checks"][0];
  EXPECT_NEAR(c["lhs"].get<double>() / 0.144564705343708206, 1.0, 1e-3);
  EXPECT_NEAR(c["rhs"].get<double>(), 0.144564705343708206, 1e-15);
}

TEST(CliTest, BoundsTableCsvAndConsistencyChecks) {
  const fs::path dir = TempDir("bounds");
  const Outcome o = RunCli({"--out", dir.string(), "bounds-table", "--order", "2,3"});
  ASSERT_EQ(o.code, kExitPass) << o.err;
  const std::string csv = ReadFile(dir / "bounds.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,beta,t,order,norm_v,value");
  EXPECT_NE(csv.find("LGE,1,inf,2,1,2\n"), std::string::npos);
  EXPECT_EQ(o.report()["checks"].size(), 2u * 4u * 2u);
  fs::remove_all(dir);
}

TEST(CliTest, EveryCommandPassesWithDefaults) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"coupling"},
        {"dualsd"},
        {"dualsd", "--random", "20"},
        {"score", "--n", "20000"},
        {"fpverify", "--mode", "all", "--potential", "x^2/2+0.1*sin(x)"},
        {"schedule", "--continuous", "--L", "2", "--T", "0.5"}}) {
    const Outcome o = RunCli(args);
    EXPECT_EQ(o.code, kExitPass) << args[0] << ": " << o.err;
  }
}

TEST(CliTest, DeterministicReports) {
  const std::vector<std::string> args = {"--seed", "17", "score", "--n", "20000",
                                         "--d", "2"};
  EXPECT_EQ(RunCli(args).out, RunCli(args).out);
  const std::vector<std::string> other = {"--seed", "18", "score", "--n", "20000",
                                          "--d", "2"};
  EXPECT_NE(RunCli(args).out, RunCli(other).out);
  const std::vector<std::string> coupling = {"--seed", "3", "coupling"};
  EXPECT_EQ(RunCli(coupling).out, RunCli(coupling).out);
}

TEST(CliTest, ConfigFileMergesAndFlagsWin) {
  const fs::path dir = TempDir("config");
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# tightness sweep\ncommand = tightness\nL = 2\n"
                        "h = 0.01\nN = 5\nq = 4\nv = 0.5\n";
  const Outcome from_file = RunCli({"--config", cfg.string()});
  ASSERT_EQ(from_file.code, kExitPass) << from_file.err;
  EXPECT_EQ(from_file.report()["params"]["L"][0].get<double>(), 2.0);
  const Outcome overridden = RunCli({"tightness", "--config", cfg.string(), "--L", "0.5"});
  ASSERT_EQ(overridden.code, kExitPass) << overridden.err;
  EXPECT_EQ(overridden.report()["params"]["L"][0].get<double>(), 0.5);
  EXPECT_EQ(overridden.report()["params"]["q"][0].get<double>(), 4.0);

  std::ofstream(cfg) << "command = schedule\ncontinuous = true\nL = 1\nT = 1\n";
  const Outcome flag = RunCli({"--config", cfg.string()});
  ASSERT_EQ(flag.code, kExitPass) << flag.err;
  EXPECT_TRUE(flag.report()["params"]["continuous"].get<bool>());

  std::ofstream(cfg) << "L 2\n";
  EXPECT_EQ(RunCli({"tightness", "--config", cfg.string()}).code, kExitInvalid);
  EXPECT_EQ(RunCli({"tightness", "--config", (dir / "missing").string()}).code,
            kExitInvalid);
  fs::remove_all(dir);
}

TEST(CliTest, InvalidConfigurationsExitTwo) {
  const std::vector<std::vector<std::string>> cases = {
      {},
      {"frobnicate"},
      {"tightness", "--L", "abc"},
      {"tightness", "--L", "10", "--h", "0.1"},
      {"tightness", "--q", "0.5"},
      {"schedule", "--c1", "2", "--c2", "1", "--N", "3"},
      {"schedule", "--c1", "1"},
      {"bounds-table", "--kinds", "multi_step"},
      {"bounds-table", "--kinds", "SRT_9"},
      {"fpverify", "--potential", "x^2/2", "--beta", "0.5"},
      {"fpverify", "--potential", "x^^2"},
      {"fpverify", "--mode", "nope"},
      {"fpverify", "--v", "15"},
      {"score", "--n", "50"},
      {"score", "--lambdas", "4"},
      {"score", "--d", "2", "--potential", "x^2/2"},
      {"coupling", "--states", "7"},
      {"dualsd", "--mu", "1,2", "--nu", "0"},
      {"dualsd", "--a", "-1"},
      {"tightness", "--unknown", "1"},
  };
  for (const auto& args : cases) {
    const Outcome o = RunCli(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(o.code, kExitInvalid) << joined << "\n" << o.err;
    EXPECT_FALSE(o.err.empty()) << joined;
  }
}

TEST(CliTest, HelpExitsZero) {
  const Outcome o = RunCli({"--help"});
  EXPECT_EQ(o.code, kExitPass);
  EXPECT_NE(o.out.find("tightness"), std::string::npos);
  EXPECT_EQ(RunCli({"tightness", "--help"}).code, kExitPass);
}

TEST(CliTest, NumericalFailureExitsOne) {
  // The grid is too narrow for the density to decay at the boundary.
  const Outcome o = RunCli({"fpverify", "--lower", "-2", "--upper", "2",
                            "--points", "512"});
  EXPECT_EQ(o.code, kExitFail) << o.err;
}

TEST(CliTest, FailingChecksAreSerialized) {
  const fs::path dir = TempDir("failing");
  ExperimentConfig config;
  config.command = "tightness";
  config.output_path = dir.string();
  RunResult result;
  result.report.command = "tightness";
  Check good{"ok", 1.0, 2.0, 1.0, true};
  Check bad{"instance 7", 3.0, 2.0, -1.0, false};
  result.report.checks = {good, bad};
  result.files["tightness.csv"] = "a\n";
  std::ostringstream out, err;
  EXPECT_EQ(WriteResult(result, config, out, err), kExitFail);
  const json r = json::parse(out.str());
  ASSERT_EQ(r["details"]["failing"].size(), 1u);
  EXPECT_EQ(r["details"]["failing"][0]["name"], "instance 7");
  EXPECT_NE(err.str().find("instance 7"), std::string::npos);
  EXPECT_EQ(ReadFile(dir / "tightness.csv"), "a\n");
  EXPECT_EQ(ReadFile(dir / "report.json"), out.str());
  fs::remove_all(dir);
}

}  // namespace
}  // namespace shiftlab
