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

// Machine-readable verification reports. Every floating value is written
// with 17 significant digits so identical runs produce byte-identical files.

#ifndef SHIFTLAB_REPORT_H_
#define SHIFTLAB_REPORT_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace shiftlab {

inline constexpr char kVersion[] = "1.0.0";

// "%.17g", with "inf", "-inf" and "nan" spelled out.
std::string FormatDouble(double value);

// One asserted inequality lhs <= rhs (or equality within tolerance).
struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs unless the check defines otherwise.
  bool pass = false;
};

void to_json(nlohmann::json& j, const Check& check);

struct Report {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  // Command-specific payload (fitted constants, per-instance detail, ...).
  nlohmann::json extra = nlohmann::json::object();

  bool AllPassed() const;
  nlohmann::json ToJson() const;
};

// Serializes with sorted keys, two-space indentation and 17 significant
// digits for floating values. Non-finite numbers become strings.
void WriteJson(const nlohmann::json& value, std::ostream& out);
std::string DumpJson(const nlohmann::json& value);

}  // namespace shiftlab

#endif  // SHIFTLAB_REPORT_H_
