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
#include <set>
#include <vector>

#include "grandnorm/monotonicity.hpp"

using namespace grandnorm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

GridFunction sample(std::size_t n, double (*g)(double, double)) {
  const double h = 2.0 / static_cast<double>(n - 1);
  return GridFunction::sample_plane(n, n, h, -1.0, -1.0, g);
}

double linear(double x, double y) { return 0.3 * x - 1.2 * y + 0.7; }
double radial(double x, double y) { return x * x + y * y; }

// Sum over neighbours of |u - nb|^(p-2) (u - nb): zero at a local minimizer.
double stationarity(const GridFunction& u, std::size_t i, std::size_t j, double p) {
  const double c = u.at(i, j);
  double s = 0.0;
  for (double nb : {u.at(i - 1, j), u.at(i + 1, j), u.at(i, j - 1), u.at(i, j + 1)}) {
    const double d = c - nb;
    s += std::pow(std::abs(d), p - 1.0) * (d < 0 ? -1.0 : 1.0);
  }
  return s;
}

}  // namespace

TEST_CASE("oscillation") {
  const auto u = sample(5, radial);
  CHECK_THAT(oscillation(u), WithinAbs(2.0, 1e-15));
  const std::size_t region[] = {0, 12};
  CHECK_THAT(oscillation(u, region), WithinAbs(2.0, 1e-15));
  const std::size_t single[] = {7};
  CHECK(oscillation(u, single) == 0.0);
  CHECK_THROWS_AS(oscillation(u, std::span<const std::size_t>{}), std::invalid_argument);
}

TEST_CASE("ball stencils follow the distance rule") {
  const auto u = sample(21, linear);
  for (std::size_t r = 2; r <= 9; ++r) {
    const Ball b = make_ball(u, 10, 10, r);
    std::set<std::size_t> in(b.interior.begin(), b.interior.end());
    std::set<std::size_t> ring(b.boundary.begin(), b.boundary.end());
    std::size_t n_in = 0, n_ring = 0;
    for (long dj = -10; dj <= 10; ++dj) {
      for (long di = -10; di <= 10; ++di) {
        const long d2 = di * di + dj * dj;
        const long r1 = static_cast<long>(r) - 1;
        const std::size_t k = static_cast<std::size_t>((10 + dj) * 21 + 10 + di);
        if (d2 < r1 * r1) {
          ++n_in;
          CHECK(in.count(k) == 1);
        } else if (d2 <= static_cast<long>(r * r)) {
          ++n_ring;
          CHECK(ring.count(k) == 1);
        }
      }
    }
    CHECK(in.size() == n_in);
    CHECK(ring.size() == n_ring);
  }
  CHECK_THROWS_AS(make_ball(u, 10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_ball(u, 2, 10, 3), std::invalid_argument);
}

TEST_CASE("linear functions are weakly monotone") {
  const auto r = weak_monotone_check(sample(17, linear));
  CHECK(r.passed);
  CHECK(r.balls_checked > 100);
  CHECK_FALSE(r.violation.has_value());
}

TEST_CASE("x^2 + y^2 is not weakly monotone") {
  const auto u = sample(17, radial);
  const auto r = weak_monotone_check(u);
  REQUIRE_FALSE(r.passed);
  REQUIRE(r.violation.has_value());
  const auto& v = *r.violation;
  CHECK(v.value < v.boundary_min - r.tolerance);
  // The offending ball contains the minimum at the centre of the grid.
  const double di = static_cast<double>(v.ci) - 8.0, dj = static_cast<double>(v.cj) - 8.0;
  CHECK(std::hypot(di, dj) < static_cast<double>(v.radius) - 1.0);
}

TEST_CASE("boundary enumeration visits each perimeter node once") {
  for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{4, 4}, {7, 5}, {33, 33}}) {
    BoundaryData b{nx, ny, std::vector<double>(BoundaryData::perimeter(nx, ny))};
    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < b.values.size(); ++k) {
      const std::size_t idx = b.index(k);
      const std::size_t i = idx % nx, j = idx / nx;
      CHECK((i == 0 || j == 0 || i == nx - 1 || j == ny - 1));
      seen.insert(idx);
      // Consecutive perimeter points are grid neighbours.
      const std::size_t nxt = b.index((k + 1) % b.values.size());
      const long d = std::labs(static_cast<long>(nxt % nx) - static_cast<long>(i)) +
                     std::labs(static_cast<long>(nxt / nx) - static_cast<long>(j));
      CHECK(d == 1);
    }
    CHECK(seen.size() == b.values.size());
    CHECK(b.index(0) == 0);
    CHECK(b.index(nx - 1) == nx - 1);
  }
  BoundaryData bad{4, 4, {1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("relaxation reproduces linear data") {
  const std::size_t n = 17;
  const double h = 2.0 / (n - 1);
  const auto g = BoundaryData::from_function(n, n, h, -1.0, -1.0, linear);
  for (double p : {2.0, 3.0, 1.5}) {
    const auto r = relax_p(g, p, {.h = h, .x0 = -1.0, .y0 = -1.0});
    CHECK(r.converged);
    const auto ref = sample(n, linear);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK_THAT(r.u[k], WithinAbs(ref[k], 1e-9));
  }
}

TEST_CASE("relaxed solutions are stationary and weakly monotone") {
  for (double p : {2.0, 3.0}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto r = relax_p(BoundaryData::random(17, 17, seed), p);
      REQUIRE(r.converged);
      CHECK(r.energy_monotone);
      for (std::size_t k = 1; k < r.energy.size(); ++k) {
        CHECK(r.energy[k] <= r.energy[k - 1] * (1.0 + 1e-12));
      }
      double worst = 0.0;
      for (std::size_t j = 1; j + 1 < 17; ++j) {
        for (std::size_t i = 1; i + 1 < 17; ++i) {
          worst = std::max(worst, std::abs(stationarity(r.u, i, j, p)));
        }
      }
      CHECK(worst < 1e-7);
      CHECK(weak_monotone_check(r.u).passed);
    }
  }
}

TEST_CASE("relaxation commutes with affine maps of the data") {
  auto g = BoundaryData::random(13, 11, 21);
  const auto base = relax_p(g, 3.0);
  for (double& v : g.values) v = -2.0 * v + 5.0;
  const auto mapped = relax_p(g, 3.0);
  REQUIRE(base.converged);
  REQUIRE(mapped.converged);
  for (std::size_t k = 0; k < base.u.size(); ++k) {
    CHECK_THAT(mapped.u[k], WithinAbs(-2.0 * base.u[k] + 5.0, 1e-7));
  }
}

TEST_CASE("relax_p validates its inputs") {
  const auto g = BoundaryData::random(8, 8, 1);
  CHECK_THROWS_AS(relax_p(g, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(relax_p(g, 9.0), std::invalid_argument);
  BoundaryData small{3, 3, std::vector<double>(8, 0.0)};
  CHECK_THROWS_AS(relax_p(small, 2.0), std::invalid_argument);
  const auto capped = relax_p(BoundaryData::random(17, 17, 2), 3.0, {.tol = 1e-14, .max_iters = 3});
  CHECK_FALSE(capped.converged);
  CHECK(capped.sweeps == 3);
}

TEST_CASE("grand Sobolev norm of linear and constant functions") {
  const auto u = sample(9, linear);
  const auto grad = gradient_magnitude(u);
  for (const Atom& a : grad.atoms()) CHECK_THAT(a.value, WithinRel(std::hypot(0.3, 1.2), 1e-12));
  for (double theta : {0.0, 1.0, 2.0}) {
    CHECK_THAT(grand_sobolev_norm(u, theta).value, WithinRel(std::hypot(0.3, 1.2), 1e-12));
  }
  const auto c = sample(9, [](double, double) { return 4.0; });
  CHECK(grand_sobolev_norm(c, 1.0).value == 0.0);
}
