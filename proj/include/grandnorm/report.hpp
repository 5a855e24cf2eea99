// Copyright 2026 The grandnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GRANDNORM_REPORT_HPP
#define GRANDNORM_REPORT_HPP

// Suite reports. Needs nlohmann/json (vendor/json.hpp) on the include path.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grandnorm/io.hpp"
#include "grandnorm/pgrid.hpp"

namespace grandnorm {

inline constexpr const char* kVersion = "0.1.0";

struct CheckRecord {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
  /// bound - observed for upper bounds; positive means room to spare.
  double slack = 0.0;
};

/// observed <= bound.
inline CheckRecord upper_check(std::string name, double observed, double bound) {
  return {std::move(name), observed <= bound, observed, bound, bound - observed};
}

/// observed >= bound.
inline CheckRecord lower_check(std::string name, double observed, double bound) {
  return {std::move(name), observed >= bound, observed, bound, observed - bound};
}

/// A yes/no outcome recorded as observed 1/0 against bound 1.
inline CheckRecord flag_check(std::string name, bool ok) {
  return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : -1.0};
}

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
  void add(CheckRecord c) { checks.push_back(std::move(c)); }
};

namespace detail {

// JSON has no infinities; NaN and +-inf serialize as null.
inline nlohmann::ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const GridDescriptor& g) {
  return {{"p_min", g.p_min}, {"p_max", g.p_max}, {"ratio", g.ratio}, {"n", g.n}};
}

inline nlohmann::ordered_json to_json(const NormReport& r) {
  nlohmann::ordered_json j = {{"value", detail::number(r.value)},
                              {"argmax_exponent", detail::number(r.argmax_exponent)},
                              {"tail_bound", detail::number(r.tail_bound)},
                              {"grid", to_json(r.grid)},
                              {"converged", r.converged}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::ordered_json to_json(const SuiteReport& r) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"status", c.passed ? "pass" : "fail"},
                      {"observed", detail::number(c.observed)},
                      {"bound", detail::number(c.bound)},
                      {"slack", detail::number(c.slack)}});
  }
  return {{"suite", r.suite},
          {"passed", r.passed()},
          {"checks", std::move(checks)},
          {"details", r.details},
          {"provenance", r.provenance}};
}

/// Flattened projection: one row per check.
inline std::string to_csv(const SuiteReport& r) {
  std::string out = "suite,check,status,observed,bound,slack\n";
  for (const auto& c : r.checks) {
    out += r.suite + "," + c.name + "," + (c.passed ? "pass" : "fail") + "," +
           detail::format_double(c.observed) + "," + detail::format_double(c.bound) + "," +
           detail::format_double(c.slack) + "\n";
  }
  return out;
}

}  // namespace grandnorm

#endif  // GRANDNORM_REPORT_HPP
