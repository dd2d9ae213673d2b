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

#include "shiftlab/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace shiftlab {
namespace {

void Indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

void WriteString(const std::string& s, std::ostream& out) {
  // nlohmann handles escaping.
  out << nlohmann::json(s).dump();
}

void WriteValue(const nlohmann::json& value, std::ostream& out, int depth) {
  switch (value.type()) {
    case nlohmann::json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      // nlohmann::json objects iterate in sorted key order.
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        Indent(out, depth + 1);
        WriteString(it.key(), out);
        out << ": ";
        WriteValue(it.value(), out, depth + 1);
      }
      out << '\n';
      Indent(out, depth);
      out << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out << ",\n";
        Indent(out, depth + 1);
        WriteValue(value[i], out, depth + 1);
      }
      out << '\n';
      Indent(out, depth);
      out << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = value.get<double>();
      if (std::isfinite(v)) {
        out << FormatDouble(v);
      } else {
        WriteString(FormatDouble(v), out);
      }
      return;
    }
    default:
      out << value.dump();
  }
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void to_json(nlohmann::json& j, const Check& check) {
  j = nlohmann::json{{"name", check.name},
                     {"lhs", check.lhs},
                     {"rhs", check.rhs},
                     {"margin", check.margin},
                     {"pass", check.pass}};
}

bool Report::AllPassed() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json Report::ToJson() const {
  nlohmann::json j;
  j["command"] = command;
  j["params"] = params;
  j["checks"] = checks;
  j["seed"] = seed;
  j["version"] = kVersion;
  if (!extra.empty()) j["details"] = extra;
  return j;
}

void WriteJson(const nlohmann::json& value, std::ostream& out) {
  WriteValue(value, out, 0);
  out << '\n';
}

std::string DumpJson(const nlohmann::json& value) {
  std::ostringstream out;
  WriteJson(value, out);
  return out.str();
}

}  // namespace shiftlab
