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

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "grandnorm/generators.hpp"
#include "grandnorm/step_function.hpp"

using namespace grandnorm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

StepFunction random_step(std::uint64_t seed, std::size_t n) {
  return discretize(AnalyticFunctionSpec::random_step(seed, n));
}

// Naive power mean; fine for moderate p.
double naive_mean(const StepFunction& f, double p) {
  double s = 0.0;
  for (const Atom& a : f.atoms()) s += std::pow(std::abs(a.value), p) * a.measure;
  return std::pow(s / f.total_measure(), 1.0 / p);
}

}  // namespace

TEST_CASE("step function construction validates atoms") {
  CHECK_THROWS_AS(StepFunction({}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({{1.0, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({{std::numeric_limits<double>::infinity(), 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(StepFunction({{1.0, 0.5}}, 1.0), std::invalid_argument);
  const StepFunction f({{1.0, 0.25}, {0.0, 0.75}});
  CHECK(f.total_measure() == 1.0);
  CHECK(f.max_abs() == 1.0);
  CHECK_FALSE(f.is_zero());
  CHECK(StepFunction({{0.0, 2.0}}).is_zero());
}

TEST_CASE("merged combines equal values without changing norms") {
  const StepFunction f({{2.0, 0.1}, {1.0, 0.2}, {2.0, 0.3}, {-1.0, 0.4}});
  const StepFunction m = f.merged();
  CHECK(m.size() == 3);
  CHECK_THAT(m.total_measure(), WithinRel(1.0, 1e-15));
  for (double p : {1.0, 2.0, 5.0}) CHECK_THAT(lp_mean(m, p), WithinRel(lp_mean(f, p), 1e-14));
}

TEST_CASE("lp_mean examples") {
  const StepFunction c({{2.0, 0.3}, {2.0, 0.7}});
  for (double p : {1.0, 2.0, 17.5, 1e4}) CHECK_THAT(lp_mean(c, p), WithinRel(2.0, 1e-14));

  const StepFunction chi({{1.0, 0.5}, {0.0, 0.5}});
  CHECK_THAT(lp_mean(chi, 2.0), WithinRel(std::sqrt(0.5), 1e-15));

  const StepFunction zero({{0.0, 1.0}});
  CHECK(lp_mean(zero, 3.0) == 0.0);
}

TEST_CASE("lp_mean of -ln x approximates the factorial moments") {
  const auto f = discretize(AnalyticFunctionSpec::log_power(1.0, 100000));
  CHECK_THAT(lp_mean(f, 2.0), WithinRel(std::sqrt(2.0), 1e-3));
}

TEST_CASE("lp_mean matches a naive sum and stays finite for huge p") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_step(seed, 40);
    for (double p : {1.0, 1.5, 2.0, 3.0, 8.0}) {
      CHECK_THAT(lp_mean(f, p), WithinRel(naive_mean(f, p), 1e-12));
    }
    // |v|^p overflows for p = 1e4 in a naive sum when |v| > 1.1.
    const double big = lp_mean(f.scaled(1e3), 1e4);
    CHECK(std::isfinite(big));
    CHECK(big <= 1e3 * f.max_abs() * (1 + 1e-12));
  }
}

TEST_CASE("property: lp_mean is nondecreasing in p") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_step(seed, 32);
    double prev = 0.0;
    for (double p = 1.0; p < 2e4; p *= 1.3) {
      const double v = lp_mean(f, p);
      CHECK(prev <= v + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("property: lp_mean approaches max|v| as p grows") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = random_step(seed, 16);
    const double e3 = f.max_abs() - lp_mean(f, 1e3);
    const double e4 = f.max_abs() - lp_mean(f, 1e4);
    CHECK(e3 >= 0.0);
    CHECK(e4 >= 0.0);
    CHECK(e4 <= e3);
  }
}

TEST_CASE("distribution function examples") {
  const StepFunction chi({{1.0, 0.3}, {0.0, 0.7}});
  const auto d = distribution(chi);
  CHECK(d(0.0) == 0.3);
  CHECK(d(0.5) == 0.3);
  CHECK(d(0.999) == 0.3);
  CHECK(d(1.0) == 0.0);
  CHECK(d(5.0) == 0.0);

  const auto z = distribution(StepFunction({{0.0, 1.0}}));
  for (double t : {0.0, 0.1, 10.0}) CHECK(z(t) == 0.0);
}

TEST_CASE("distribution breakpoints are the distinct |values|") {
  const StepFunction f({{3.0, 0.1}, {-3.0, 0.2}, {1.0, 0.3}, {0.0, 0.4}});
  const auto d = distribution(f);
  const auto bps = d.breakpoints();
  REQUIRE(bps.size() == 3);
  CHECK(bps[0].threshold == 0.0);
  CHECK_THAT(bps[0].measure, WithinAbs(0.6, 1e-15));
  CHECK(bps[1].threshold == 1.0);
  CHECK_THAT(bps[1].measure, WithinAbs(0.3, 1e-15));
  CHECK(bps[2].threshold == 3.0);
  CHECK(bps[2].measure == 0.0);
}

TEST_CASE("distribution against brute force on random functions") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto f = random_step(seed, 25);
    const auto d = distribution(f);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(0.0, 6.0);
    for (int k = 0; k < 50; ++k) {
      const double x = t(rng);
      double brute = 0.0;
      for (const Atom& a : f.atoms()) {
        if (std::abs(a.value) > x) brute += a.measure;
      }
      CHECK_THAT(d(x), WithinAbs(brute, 1e-14));
    }
  }
}

TEST_CASE("distribution of -ln x approximates exp(-t)") {
  const auto spec = AnalyticFunctionSpec::log_power(1.0, 20000);
  const auto f = discretize(spec);
  const auto d = distribution(f);
  // Cell widths bound the error: each level set boundary is off by at most one cell.
  double widest = 0.0;
  for (const Atom& a : f.atoms()) widest = std::max(widest, a.measure);
  for (double t = 0.0; t < 30.0; t += 0.37) {
    CHECK(std::abs(d(t) - std::exp(-t)) <= widest);
  }
}

TEST_CASE("rearrangement examples") {
  const StepFunction f({{3.0, 0.2}, {1.0, 0.5}, {2.0, 0.3}});
  const auto r = rearrangement(f);
  const auto pl = r.plateaus();
  REQUIRE(pl.size() == 3);
  CHECK(pl[0].length == 0.2);
  CHECK(pl[0].value == 3.0);
  CHECK(pl[1].length == 0.3);
  CHECK(pl[1].value == 2.0);
  CHECK(pl[2].length == 0.5);
  CHECK(pl[2].value == 1.0);
  CHECK(r(0.1) == 3.0);
  CHECK(r(0.25) == 2.0);
  CHECK(r(0.9) == 1.0);

  const auto c = rearrangement(StepFunction({{-4.0, 1.5}}));
  REQUIRE(c.plateaus().size() == 1);
  CHECK(c.plateaus()[0].length == 1.5);
  CHECK(c.plateaus()[0].value == 4.0);
}

TEST_CASE("property: equimeasurability is exact") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_step(seed, 50);
    CHECK(distribution(f) == distribution(rearrangement(f)));
  }
  // Repeated values and zeros.
  const StepFunction g({{2.0, 0.1}, {-2.0, 0.2}, {0.0, 0.3}, {1.0, 0.4}});
  CHECK(distribution(g) == distribution(rearrangement(g)));
}

TEST_CASE("property: power integral of the rearrangement equals the atom sum") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = random_step(seed, 30);
    const auto r = rearrangement(f);
    for (double p : {1.0, 2.0, 3.5}) {
      double plateau_sum = 0.0;
      for (const Plateau& pl : r.plateaus()) plateau_sum += std::pow(pl.value, p) * pl.length;
      double atom_sum = 0.0;
      for (const Atom& a : f.atoms()) atom_sum += std::pow(std::abs(a.value), p) * a.measure;
      CHECK_THAT(plateau_sum, WithinRel(atom_sum, 1e-13));
      const auto pi = r.power_integrals(p);
      CHECK_THAT(std::pow(pi.head_root(r.domain_length()), p), WithinRel(atom_sum, 1e-12));
      CHECK_THAT(std::pow(pi.tail_root(0.0), p), WithinRel(atom_sum, 1e-12));
    }
  }
}

TEST_CASE("partial power integrals split at an interior point") {
  const StepFunction f({{3.0, 0.2}, {1.0, 0.5}, {2.0, 0.3}});
  const auto pi = rearrangement(f).power_integrals(2.0);
  // f* = 3 on [0, .2), 2 on [.2, .5), 1 on [.5, 1).
  CHECK_THAT(std::pow(pi.head_root(0.35), 2.0), WithinRel(9 * 0.2 + 4 * 0.15, 1e-14));
  CHECK_THAT(std::pow(pi.tail_root(0.35), 2.0), WithinRel(4 * 0.15 + 1 * 0.5, 1e-14));
}

TEST_CASE("layer cake examples") {
  const StepFunction chi({{1.0, 0.4}, {0.0, 0.6}});
  for (double s : {1.0, 2.0, 7.5}) {
    const auto lc = layer_cake(chi, s);
    CHECK_THAT(lc.lhs, WithinRel(0.4, 1e-15));
    CHECK_THAT(lc.rhs, WithinRel(0.4, 1e-15));
  }
  const auto two = layer_cake(StepFunction({{1.0, 0.5}, {2.0, 0.5}}), 2.0);
  CHECK_THAT(two.lhs, WithinRel(2.5, 1e-15));
  CHECK_THAT(two.rhs, WithinRel(2.5, 1e-15));
  CHECK_THAT(two.mean_lhs(), WithinRel(2.5, 1e-15));
  CHECK_THROWS_AS(layer_cake(chi, 0.5), std::invalid_argument);
}

TEST_CASE("property: layer cake identity on random functions") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_step(seed, 64);
    for (double s : {1.0, 1.5, 2.0, 3.0, 7.0}) {
      CHECK(layer_cake(f, s).relative_discrepancy() <= 1e-10);
    }
  }
}

TEST_CASE("sum on a shared partition") {
  const auto [f, g] = random_pair(3, 10);
  const auto h = sum_on_shared_partition(f, g);
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(h.atoms()[i].value == f.atoms()[i].value + g.atoms()[i].value);
  }
  const StepFunction other({{1.0, 1.0}});
  CHECK_THROWS_AS(sum_on_shared_partition(f, other), std::invalid_argument);
}
