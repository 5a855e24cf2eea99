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
#ifndef GRANDNORM_GENERATORS_HPP
#define GRANDNORM_GENERATORS_HPP

// Analytic test functions and their step-function discretizations.
//
//   log_power(theta)   (-ln x)^theta on (0,1)
//   power(alpha)       x^alpha on (lo,hi), lo >= 0
//   constant(c)        c
//   indicator(a,b)     1 on [a,b), 0 elsewhere
//   random_step(seed)  random values on a random partition
//
// Singular kinds (log_power, negative powers at 0) use a graded mesh: cells
// shrink geometrically with ratio 0.9 toward the singular endpoint, then a
// uniform zone continues to the far end. Atom values are midpoint samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grandnorm/error.hpp"
#include "grandnorm/step_function.hpp"

namespace grandnorm {

enum class FunctionKind { log_power, power, constant, indicator, random_step };

inline const char* to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::log_power: return "log_power";
    case FunctionKind::power: return "power";
    case FunctionKind::constant: return "constant";
    case FunctionKind::indicator: return "indicator";
    case FunctionKind::random_step: return "random_step";
  }
  return "?";
}

struct AnalyticFunctionSpec {
  FunctionKind kind = FunctionKind::constant;
  double theta = 1.0;   ///< log_power exponent, in (0, 1]
  double alpha = 1.0;   ///< power exponent
  double c = 1.0;       ///< constant value
  double a = 0.0;       ///< indicator left end
  double b = 1.0;       ///< indicator right end
  std::uint64_t seed = 0;
  double lo = 0.0;      ///< domain (lo, hi)
  double hi = 1.0;
  std::size_t n = 1000;

  static AnalyticFunctionSpec log_power(double theta, std::size_t n) {
    AnalyticFunctionSpec s;
    s.kind = FunctionKind::log_power;
    s.theta = theta;
    s.n = n;
    return s;
  }
  static AnalyticFunctionSpec power(double alpha, std::size_t n, double lo = 0.0,
                                    double hi = 1.0) {
    AnalyticFunctionSpec s;
    s.kind = FunctionKind::power;
    s.alpha = alpha;
    s.n = n;
    s.lo = lo;
    s.hi = hi;
    return s;
  }
  static AnalyticFunctionSpec constant(double c, std::size_t n) {
    AnalyticFunctionSpec s;
    s.kind = FunctionKind::constant;
    s.c = c;
    s.n = n;
    return s;
  }
  static AnalyticFunctionSpec indicator(double a, double b, std::size_t n) {
    AnalyticFunctionSpec s;
    s.kind = FunctionKind::indicator;
    s.a = a;
    s.b = b;
    s.n = n;
    return s;
  }
  static AnalyticFunctionSpec random_step(std::uint64_t seed, std::size_t n) {
    AnalyticFunctionSpec s;
    s.kind = FunctionKind::random_step;
    s.seed = seed;
    s.n = n;
    return s;
  }

  double length() const { return hi - lo; }

  void validate() const {
    detail::require(n >= 2, "generator: resolution n must be >= 2");
    detail::require(std::isfinite(lo) && std::isfinite(hi) && hi > lo,
                    "generator: domain length must be positive");
    switch (kind) {
      case FunctionKind::log_power:
        detail::require(theta > 0.0 && theta <= 1.0, "log_power: theta must be in (0, 1]");
        detail::require(lo == 0.0 && hi == 1.0, "log_power: domain must be (0, 1)");
        break;
      case FunctionKind::power:
        detail::require(std::isfinite(alpha), "power: alpha must be finite");
        detail::require(lo >= 0.0, "power: domain must lie in [0, inf)");
        break;
      case FunctionKind::constant:
        detail::require(std::isfinite(c), "constant: c must be finite");
        break;
      case FunctionKind::indicator:
        detail::require(a < b, "indicator: need a < b");
        break;
      case FunctionKind::random_step:
        break;
    }
  }

  /// Canonical "kind:key=value,..." string, parseable by parse_spec.
  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind) << ':';
    switch (kind) {
      case FunctionKind::log_power: os << "theta=" << theta; break;
      case FunctionKind::power: os << "alpha=" << alpha; break;
      case FunctionKind::constant: os << "c=" << c; break;
      case FunctionKind::indicator: os << "a=" << a << ",b=" << b; break;
      case FunctionKind::random_step: os << "seed=" << seed; break;
    }
    os << ",n=" << n << ",lo=" << lo << ",hi=" << hi;
    return os.str();
  }
};

/// Parses e.g. "log_power:theta=1,n=100000" or "indicator:a=0,b=0.3,n=10".
inline AnalyticFunctionSpec parse_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  AnalyticFunctionSpec s;
  if (kind == "log_power") s.kind = FunctionKind::log_power;
  else if (kind == "power") s.kind = FunctionKind::power;
  else if (kind == "constant") s.kind = FunctionKind::constant;
  else if (kind == "indicator") s.kind = FunctionKind::indicator;
  else if (kind == "random_step") s.kind = FunctionKind::random_step;
  else detail::fail("unknown generator kind '" + kind + "'");

  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) detail::fail("generator parameter '" + item + "' has no '='");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != val.size() || val.empty()) {
        detail::fail("generator parameter '" + key + "' is not a number");
      }
      if (key == "theta") s.theta = x;
      else if (key == "alpha") s.alpha = x;
      else if (key == "c") s.c = x;
      else if (key == "a") s.a = x;
      else if (key == "b") s.b = x;
      else if (key == "lo") s.lo = x;
      else if (key == "hi") s.hi = x;
      else if (key == "n" || key == "seed") {
        if (x < 0 || x != std::floor(x)) detail::fail("generator parameter '" + key + "' must be a nonnegative integer");
        if (key == "n") s.n = static_cast<std::size_t>(x);
        else s.seed = static_cast<std::uint64_t>(x);
      } else {
        detail::fail("unknown generator parameter '" + key + "'");
      }
    }
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

inline constexpr double kGradingRatio = 0.9;

/// n + 1 nodes 0 = x_0 < ... < x_n = 1, graded toward 0.
///
/// Layout: one innermost cell [0, delta], `geometric` cells [rho x, x] up to
/// x_c, then uniform cells of width (1 - rho) x_c up to 1, so the mesh has no
/// jump in cell size at x_c.
inline std::vector<double> graded_nodes(std::size_t n, std::size_t geometric) {
  detail::require(n >= 2, "graded_nodes: n must be >= 2");
  geometric = std::clamp<std::size_t>(geometric, 1, n - 1);
  const std::size_t uniform = n - 1 - geometric;
  const double rho = kGradingRatio;
  const double x_c = 1.0 / (static_cast<double>(uniform) * (1.0 - rho) + 1.0);

  std::vector<double> nodes;
  nodes.reserve(n + 1);
  nodes.push_back(0.0);
  for (std::size_t k = geometric + 1; k-- > 1;) {
    nodes.push_back(x_c * std::pow(rho, static_cast<double>(k)));
  }
  nodes.push_back(x_c);
  const double h = uniform > 0 ? (1.0 - x_c) / static_cast<double>(uniform) : 0.0;
  for (std::size_t k = 1; k <= uniform; ++k) {
    nodes.push_back(k == uniform ? 1.0 : x_c + h * static_cast<double>(k));
  }
  return nodes;
}

/// Default depth of the geometric zone: half the cells, capped at 6000 so the
/// innermost cell stays far above the double underflow threshold.
inline std::size_t default_geometric_cells(std::size_t n) {
  return std::min<std::size_t>(n / 2, 6000);
}

namespace detail {

inline std::vector<double> uniform_nodes(std::size_t n) {
  std::vector<double> nodes(n + 1);
  for (std::size_t k = 0; k <= n; ++k) nodes[k] = static_cast<double>(k) / static_cast<double>(n);
  nodes[n] = 1.0;
  return nodes;
}

template <class F>
StepFunction sample_midpoints(const std::vector<double>& unit_nodes, double lo, double length,
                              F&& f) {
  std::vector<Atom> atoms;
  atoms.reserve(unit_nodes.size() - 1);
  for (std::size_t k = 0; k + 1 < unit_nodes.size(); ++k) {
    const double x0 = lo + length * unit_nodes[k];
    const double x1 = lo + length * unit_nodes[k + 1];
    const double measure = length * (unit_nodes[k + 1] - unit_nodes[k]);
    atoms.push_back({f(0.5 * (x0 + x1)), measure});
  }
  return StepFunction(std::move(atoms));
}

// Graded discretization; when the innermost sample overflows, the geometric
// zone is made shallower (the first cell grows) until every value is finite.
template <class F>
StepFunction sample_graded(std::size_t n, double lo, double length, F&& f) {
  std::size_t geometric = default_geometric_cells(n);
  for (;;) {
    const auto nodes = graded_nodes(n, geometric);
    const double first_mid = lo + 0.5 * length * nodes[1];
    if (std::isfinite(f(first_mid)) || geometric <= 1) {
      return sample_midpoints(nodes, lo, length, f);
    }
    geometric = geometric * 9 / 10;
  }
}

}  // namespace detail

/// Step-function discretization of an analytic spec. total_measure is the
/// domain length.
inline StepFunction discretize(const AnalyticFunctionSpec& spec) {
  spec.validate();
  const double len = spec.length();
  switch (spec.kind) {
    case FunctionKind::log_power: {
      const double theta = spec.theta;
      return detail::sample_graded(spec.n, 0.0, 1.0,
                                   [theta](double x) { return std::pow(-std::log(x), theta); });
    }
    case FunctionKind::power: {
      const double alpha = spec.alpha;
      auto f = [alpha](double x) { return std::pow(x, alpha); };
      if (alpha < 0.0 && spec.lo == 0.0) return detail::sample_graded(spec.n, spec.lo, len, f);
      return detail::sample_midpoints(detail::uniform_nodes(spec.n), spec.lo, len, f);
    }
    case FunctionKind::constant: {
      const double c = spec.c;
      return detail::sample_midpoints(detail::uniform_nodes(spec.n), spec.lo, len,
                                      [c](double) { return c; });
    }
    case FunctionKind::indicator: {
      const double a = spec.a;
      const double b = spec.b;
      return detail::sample_midpoints(detail::uniform_nodes(spec.n), spec.lo, len,
                                      [a, b](double x) { return (x >= a && x < b) ? 1.0 : 0.0; });
    }
    case FunctionKind::random_step: {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> cell(0.05, 1.0);
      std::uniform_real_distribution<double> value(-5.0, 5.0);
      std::vector<double> widths(spec.n);
      double sum = 0.0;
      for (double& w : widths) sum += (w = cell(rng));
      std::vector<Atom> atoms;
      atoms.reserve(spec.n);
      double total = 0.0;
      for (double w : widths) {
        atoms.push_back({value(rng), w / sum * len});
        total += atoms.back().measure;
      }
      return StepFunction(std::move(atoms), total);
    }
  }
  detail::fail("discretize: unknown kind");
}

/// Independent child seed k of a base seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Two random step functions on one shared random partition.
inline std::pair<StepFunction, StepFunction> random_pair(std::uint64_t seed, std::size_t n) {
  detail::require(n >= 1, "random_pair: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cell(0.05, 1.0);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::vector<double> widths(n);
  double sum = 0.0;
  for (double& w : widths) sum += (w = cell(rng));
  std::vector<Atom> f, g;
  for (double w : widths) {
    f.push_back({value(rng), w / sum});
    g.push_back({value(rng), w / sum});
  }
  // Occasionally plant exact zeros and sign-flipped copies.
  std::uniform_int_distribution<int> coin(0, 9);
  if (coin(rng) == 0) {
    for (std::size_t i = 0; i < n; ++i) g[i].value = -f[i].value;
  }
  if (coin(rng) == 0) {
    for (std::size_t i = 0; i < n; i += 2) f[i].value = 0.0;
  }
  StepFunction sf(std::move(f));
  StepFunction sg(std::move(g), sf.total_measure());
  return {std::move(sf), std::move(sg)};
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// mean of f^m for log_power(theta) on (0,1): Gamma(m theta + 1).
inline double exact_moment(const AnalyticFunctionSpec& spec, double m) {
  detail::require(spec.kind == FunctionKind::log_power, "exact_moment: kind must be log_power");
  detail::require(m > 0.0, "exact_moment: m must be positive");
  return std::exp(std::lgamma(m * spec.theta + 1.0));
}

/// |{|f| > t}| in closed form.
inline double exact_distribution(const AnalyticFunctionSpec& spec, double t) {
  detail::require(t >= 0.0, "exact_distribution: t must be >= 0");
  switch (spec.kind) {
    case FunctionKind::log_power:
      // (-ln x)^theta > t  <=>  x < exp(-t^(1/theta))
      return std::exp(-std::pow(t, 1.0 / spec.theta));
    case FunctionKind::indicator: {
      const double a = std::max(spec.a, spec.lo);
      const double b = std::min(spec.b, spec.hi);
      return t < 1.0 ? std::max(0.0, b - a) : 0.0;
    }
    case FunctionKind::constant:
      return t < std::abs(spec.c) ? spec.length() : 0.0;
    default:
      detail::fail("exact_distribution: unsupported kind");
  }
}

}  // namespace grandnorm

#endif  // GRANDNORM_GENERATORS_HPP
