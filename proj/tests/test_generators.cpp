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


#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grandnorm/generators.hpp"

using namespace grandnorm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double max_cell(const StepFunction& f) {
  double w = 0.0;
  for (const Atom& a : f.atoms()) w = std::max(w, a.measure);
  return w;
}

// Gamma(m theta + 1)^(1/m), the L^m mean of (-ln x)^theta on (0, 1).
double moment_root(double theta, double m) { return std::exp(std::lgamma(m * theta + 1.0) / m); }

}  // namespace

TEST_CASE("constant generator") {
  const auto f = discretize(AnalyticFunctionSpec::constant(4.0, 16));
  CHECK(f.size() == 16);
  CHECK_THAT(f.total_measure(), WithinRel(1.0, 1e-15));
  for (const Atom& a : f.atoms()) CHECK(a.value == 4.0);
  CHECK(lp_mean(f, 3.0) == 4.0);
}

TEST_CASE("indicator generator carries the right mass") {
  const auto spec = AnalyticFunctionSpec::indicator(0.0, 0.3, 1000);
  const auto f = discretize(spec);
  double mass = 0.0;
  for (const Atom& a : f.atoms()) mass += a.value * a.measure;
  CHECK_THAT(mass, WithinAbs(0.3, 1e-3));
  CHECK_THAT(exact_distribution(spec, 0.5), WithinAbs(0.3, 1e-15));
  CHECK(exact_distribution(spec, 1.0) == 0.0);
}

TEST_CASE("graded mesh partitions (0, 1) without jumps") {
  const auto nodes = graded_nodes(1000, 500);
  REQUIRE(nodes.size() == 1001);
  CHECK(nodes.front() == 0.0);
  CHECK(nodes.back() == 1.0);
  for (std::size_t k = 1; k < nodes.size(); ++k) CHECK(nodes[k] > nodes[k - 1]);
  // Geometric cells shrink by the grading ratio toward 0.
  const double r = (nodes[3] - nodes[2]) / (nodes[4] - nodes[3]);
  CHECK_THAT(r, WithinRel(kGradingRatio, 1e-9));
  // The last geometric cell matches the uniform width.
  const double w_geo = nodes[501] - nodes[500];
  const double w_uni = nodes[502] - nodes[501];
  CHECK_THAT(w_geo, WithinRel(w_uni, 1e-9));
  CHECK(default_geometric_cells(100) == 50);
  CHECK(default_geometric_cells(1000000) == 6000);
}

TEST_CASE("log_power moments match Gamma(m theta + 1)") {
  for (double theta : {0.5, 1.0}) {
    const auto f = discretize(AnalyticFunctionSpec::log_power(theta, 100000));
    CHECK_THAT(f.total_measure(), WithinRel(1.0, 1e-12));
    for (int m = 1; m <= 6; ++m) {
      CHECK_THAT(lp_mean(f, m), WithinRel(moment_root(theta, m), 0.01));
    }
  }
}

TEST_CASE("exact moments") {
  const auto s = AnalyticFunctionSpec::log_power(1.0, 10);
  CHECK_THAT(exact_moment(s, 3.0), WithinRel(6.0, 1e-13));
  CHECK_THAT(exact_moment(s, 1.0), WithinRel(1.0, 1e-13));
  CHECK_THAT(exact_moment(AnalyticFunctionSpec::log_power(0.5, 10), 4.0), WithinRel(2.0, 1e-13));
  CHECK_THROWS_AS(exact_moment(AnalyticFunctionSpec::constant(1.0, 4), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_moment(s, 0.0), std::invalid_argument);
}

TEST_CASE("exact distributions") {
  const auto s = AnalyticFunctionSpec::log_power(1.0, 10);
  CHECK_THAT(exact_distribution(s, 1.0), WithinRel(std::exp(-1.0), 1e-15));
  CHECK(exact_distribution(s, 0.0) == 1.0);
  const auto h = AnalyticFunctionSpec::log_power(0.5, 10);
  CHECK_THAT(exact_distribution(h, 2.0), WithinRel(std::exp(-4.0), 1e-15));
  const auto c = AnalyticFunctionSpec::constant(-3.0, 10);
  CHECK(exact_distribution(c, 2.9) == 1.0);
  CHECK(exact_distribution(c, 3.0) == 0.0);
  CHECK_THROWS_AS(exact_distribution(s, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_distribution(AnalyticFunctionSpec::random_step(1, 4), 1.0),
                  std::invalid_argument);
}

TEST_CASE("discrete distribution stays within one cell of the exact one") {
  const auto spec = AnalyticFunctionSpec::log_power(1.0, 20000);
  const auto f = discretize(spec);
  const auto d = distribution(f);
  const double w = max_cell(f);
  for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    CHECK(std::abs(d(t) - exact_distribution(spec, t)) <= w * (1.0 + 1e-12));
  }
}

TEST_CASE("refinement brings L^p means closer to the closed form") {
  for (double p : {1.0, 2.0, 4.0, 8.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : {100, 1000, 10000}) {
      const auto f = discretize(AnalyticFunctionSpec::log_power(1.0, n));
      const double err = std::abs(lp_mean(f, p) - moment_root(1.0, p));
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("power generator") {
  const auto f = discretize(AnalyticFunctionSpec::power(2.0, 1000));
  // midpoint rule on x^2 has error h^2 / 12 per unit length.
  double mean = 0.0;
  for (const Atom& a : f.atoms()) mean += a.value * a.measure;
  CHECK_THAT(mean, WithinAbs(1.0 / 3.0, 1e-6));
  const auto g = discretize(AnalyticFunctionSpec::power(-0.3, 5000));
  for (const Atom& a : g.atoms()) CHECK(std::isfinite(a.value));
  double m1 = 0.0;
  for (const Atom& a : g.atoms()) m1 += a.value * a.measure;
  CHECK_THAT(m1, WithinRel(1.0 / 0.7, 0.01));
}

TEST_CASE("parse_spec accepts the documented forms") {
  const auto s = parse_spec("log_power:theta=0.5,n=200");
  CHECK(s.kind == FunctionKind::log_power);
  CHECK(s.theta == 0.5);
  CHECK(s.n == 200);
  const auto i = parse_spec("indicator:a=0,b=0.3,n=10");
  CHECK(i.kind == FunctionKind::indicator);
  CHECK(i.b == 0.3);
  const auto r = parse_spec("random_step:seed=42,n=8");
  CHECK(r.seed == 42);
  // describe() round-trips.
  for (const auto& spec : {s, i, r, AnalyticFunctionSpec::power(-0.25, 77, 0.0, 2.0)}) {
    const auto back = parse_spec(spec.describe());
    CHECK(back.describe() == spec.describe());
  }
}

TEST_CASE("parse_spec rejects malformed input") {
  CHECK_THROWS_AS(parse_spec("nope:x=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("constant:c"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("constant:c=abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("constant:c=1,n=2.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("constant:c=1,q=2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("log_power:theta=1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("log_power:theta=0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("indicator:a=0.5,b=0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("constant:c=1,n=1"), std::invalid_argument);
}

TEST_CASE("random generators are deterministic per seed") {
  const auto a = discretize(AnalyticFunctionSpec::random_step(9, 64));
  const auto b = discretize(AnalyticFunctionSpec::random_step(9, 64));
  const auto c = discretize(AnalyticFunctionSpec::random_step(10, 64));
  REQUIRE(a.size() == b.size());
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.atoms()[k].value == b.atoms()[k].value);
    CHECK(a.atoms()[k].measure == b.atoms()[k].measure);
    differs = differs || a.atoms()[k].value != c.atoms()[k].value;
  }
  CHECK(differs);
  CHECK_THAT(a.total_measure(), WithinRel(1.0, 1e-13));

  const auto [f1, g1] = random_pair(5, 32);
  const auto [f2, g2] = random_pair(5, 32);
  for (std::size_t k = 0; k < 32; ++k) {
    CHECK(f1.atoms()[k].value == f2.atoms()[k].value);
    CHECK(g1.atoms()[k].value == g2.atoms()[k].value);
    CHECK(f1.atoms()[k].measure == g1.atoms()[k].measure);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
