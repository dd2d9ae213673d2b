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

// Batch front end. Commands:
//
//   tightness     OU exact divergence vs the discrete SRT bound (grid sweep)
//   schedule      optimal discrete or continuous shift schedule and its cost
//   bounds-table  sharp Langevin constants as a CSV table
//   fpverify      Fokker-Planck check of SRT_q / SH_p / SH_log / LGE
//   score         sub-Gaussian score checks on samples from exp(-V)
//   coupling      shifted composition rule on random finite instances
//   dualsd        generalized convolution lemma for shifted divergences
//
// Exit codes: 0 when every check passes, 1 when a check fails (or a
// numerical routine gives up), 2 for an invalid configuration.

#ifndef SHIFTLAB_CLI_H_
#define SHIFTLAB_CLI_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shiftlab/report.h"

namespace shiftlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

struct ExperimentConfig {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::string output_path;  // directory for report.json and CSV files
  std::uint64_t seed = 0;
};

// Parses arguments (program name excluded). A "--config FILE" of key=value
// lines is merged in front of the command-line flags, so flags win. A
// "command=NAME" line selects the command when none is given. Throws
// std::invalid_argument on any parse or validation error.
ExperimentConfig ParseArguments(const std::vector<std::string>& args);

struct RunResult {
  Report report;
  std::map<std::string, std::string> files;  // file name -> contents
};

// Runs the command. Throws std::invalid_argument / std::domain_error for
// configurations outside the supported regime.
RunResult Execute(const ExperimentConfig& config);

// Executes, writes the JSON report to `out` (and files under output_path),
// and returns the exit code.
int Run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// Writes an executed result: JSON report on `out`, report.json and CSV files
// under output_path, failing checks on `err` and under details.failing.
// Returns kExitPass or kExitFail.
int WriteResult(RunResult result, const ExperimentConfig& config,
                std::ostream& out, std::ostream& err);

// Parse + Run with the exit-code contract applied to every error.
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace shiftlab

#endif  // SHIFTLAB_CLI_H_
