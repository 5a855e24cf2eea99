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
#ifndef GRANDNORM_MONOTONICITY_HPP
#define GRANDNORM_MONOTONICITY_HPP

// Weak monotonicity (max/min principle on discrete balls) for 2D grid
// functions, a Gauss-Seidel solver for the discrete p-Laplacian that produces
// test data, and the grand norm of a discrete gradient.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "grandnorm/error.hpp"
#include "grandnorm/grid_function.hpp"
#include "grandnorm/norms.hpp"
#include "grandnorm/pgrid.hpp"

namespace grandnorm {

// ---------------------------------------------------------------------------
// Balls
// ---------------------------------------------------------------------------

/// Discrete ball of radius r (grid cells) under Euclidean index distance d:
/// interior is d < r - 1, boundary is the ring r - 1 <= d <= r.
struct Ball {
  std::size_t ci = 0;
  std::size_t cj = 0;
  std::size_t radius = 0;
  std::vector<std::size_t> interior;
  std::vector<std::size_t> boundary;
};

namespace detail {

struct Offset {
  long di;
  long dj;
};

struct BallStencil {
  std::vector<Offset> interior;
  std::vector<Offset> boundary;
};

inline BallStencil ball_stencil(std::size_t radius) {
  BallStencil s;
  const long r = static_cast<long>(radius);
  const long inner = (r - 1) * (r - 1);
  const long outer = r * r;
  for (long dj = -r; dj <= r; ++dj) {
    for (long di = -r; di <= r; ++di) {
      const long d2 = di * di + dj * dj;
      if (d2 < inner) s.interior.push_back({di, dj});
      else if (d2 <= outer) s.boundary.push_back({di, dj});
    }
  }
  return s;
}

inline bool ball_fits(const GridFunction& u, std::size_t ci, std::size_t cj, std::size_t r) {
  return ci >= r && cj >= r && ci + r < u.nx() && cj + r < u.ny();
}

}  // namespace detail

inline Ball make_ball(const GridFunction& u, std::size_t ci, std::size_t cj, std::size_t radius) {
  detail::require(u.dim() == 2, "make_ball: 2D grid required");
  detail::require(radius >= 2, "make_ball: radius must be >= 2");
  detail::require(detail::ball_fits(u, ci, cj, radius), "make_ball: ball does not fit in the grid");
  const auto st = detail::ball_stencil(radius);
  Ball b{ci, cj, radius, {}, {}};
  auto index = [&](const detail::Offset& o) {
    return static_cast<std::size_t>(static_cast<long>(cj) + o.dj) * u.nx() +
           static_cast<std::size_t>(static_cast<long>(ci) + o.di);
  };
  for (const auto& o : st.interior) b.interior.push_back(index(o));
  for (const auto& o : st.boundary) b.boundary.push_back(index(o));
  return b;
}

// ---------------------------------------------------------------------------
// Oscillation and the weak monotonicity check
// ---------------------------------------------------------------------------

/// max - min of u over the region.
inline double oscillation(const GridFunction& u, std::span<const std::size_t> region) {
  detail::require(!region.empty(), "oscillation: empty region");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k : region) {
    detail::require(k < u.size(), "oscillation: index out of range");
    lo = std::min(lo, u[k]);
    hi = std::max(hi, u[k]);
  }
  return hi - lo;
}

inline double oscillation(const GridFunction& u) {
  const auto s = u.samples();
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo;
}

struct MonotoneViolation {
  std::size_t ci = 0;
  std::size_t cj = 0;
  std::size_t radius = 0;
  std::size_t pi = 0;  ///< offending interior point
  std::size_t pj = 0;
  double value = 0.0;
  double boundary_min = 0.0;
  double boundary_max = 0.0;
};

struct MonotoneReport {
  bool passed = true;
  std::size_t balls_checked = 0;
  double tolerance = 0.0;  ///< absolute tolerance actually used
  std::optional<MonotoneViolation> violation;
};

/// Every discrete ball that fits in the grid (radius >= 2), centers in
/// row-major order and radii ascending: with m, M the min and max of u on the
/// boundary ring, every interior value must lie in [m - tol, M + tol]. The
/// tolerance is relative: tol * osc(u) over the whole grid. Stops at the
/// first violation.
inline MonotoneReport weak_monotone_check(const GridFunction& u, double tol = 1e-9,
                                          std::size_t max_radius = 0) {
  detail::require(u.dim() == 2, "weak_monotone_check: 2D grid required");
  MonotoneReport r;
  r.tolerance = tol * oscillation(u);
  const std::size_t limit = (std::min(u.nx(), u.ny()) - 1) / 2;
  const std::size_t rmax = max_radius == 0 ? limit : std::min(max_radius, limit);
  std::vector<detail::BallStencil> stencils;
  for (std::size_t rad = 0; rad <= rmax; ++rad) {
    stencils.push_back(rad >= 2 ? detail::ball_stencil(rad) : detail::BallStencil{});
  }
  const long nx = static_cast<long>(u.nx());
  for (std::size_t cj = 0; cj < u.ny(); ++cj) {
    for (std::size_t ci = 0; ci < u.nx(); ++ci) {
      for (std::size_t rad = 2; rad <= rmax; ++rad) {
        if (!detail::ball_fits(u, ci, cj, rad)) break;
        const auto& st = stencils[rad];
        const long base = static_cast<long>(cj) * nx + static_cast<long>(ci);
        double m = std::numeric_limits<double>::infinity();
        double big = -m;
        for (const auto& o : st.boundary) {
          const double v = u[static_cast<std::size_t>(base + o.dj * nx + o.di)];
          m = std::min(m, v);
          big = std::max(big, v);
        }
        ++r.balls_checked;
        for (const auto& o : st.interior) {
          const double v = u[static_cast<std::size_t>(base + o.dj * nx + o.di)];
          if (v < m - r.tolerance || v > big + r.tolerance) {
            r.passed = false;
            r.violation = MonotoneViolation{ci,
                                            cj,
                                            rad,
                                            static_cast<std::size_t>(static_cast<long>(ci) + o.di),
                                            static_cast<std::size_t>(static_cast<long>(cj) + o.dj),
                                            v,
                                            m,
                                            big};
            return r;
          }
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Boundary data and p-Laplacian relaxation
// ---------------------------------------------------------------------------

/// Values on the perimeter of an nx x ny grid, counterclockwise from (0, 0):
/// bottom row left to right, right column upward, top row right to left,
/// left column downward. 2 nx + 2 ny - 4 values.
struct BoundaryData {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;

  static std::size_t perimeter(std::size_t nx, std::size_t ny) { return 2 * nx + 2 * ny - 4; }

  /// Grid index of the k-th perimeter point.
  std::size_t index(std::size_t k) const {
    if (k < nx) return k;                                      // bottom
    k -= nx;
    if (k < ny - 1) return (k + 1) * nx + (nx - 1);            // right
    k -= ny - 1;
    if (k < nx - 1) return (ny - 1) * nx + (nx - 2 - k);       // top
    k -= nx - 1;
    return (ny - 2 - k) * nx;                                  // left
  }

  void validate() const {
    detail::require(nx >= 4 && ny >= 4, "BoundaryData: grid must be at least 4 x 4");
    detail::require(values.size() == perimeter(nx, ny),
                    "BoundaryData: wrong number of perimeter values");
    for (double v : values) detail::require(std::isfinite(v), "BoundaryData: values must be finite");
  }

  /// Uniform [0, 1) values from a seeded 64-bit generator.
  static BoundaryData random(std::size_t nx, std::size_t ny, std::uint64_t seed) {
    BoundaryData b{nx, ny, std::vector<double>(perimeter(nx, ny))};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double& v : b.values) v = dist(rng);
    return b;
  }

  /// g(x, y) sampled at perimeter nodes of the grid with spacing h from (x0, y0).
  template <class F>
  static BoundaryData from_function(std::size_t nx, std::size_t ny, double h, double x0, double y0,
                                    F&& g) {
    BoundaryData b{nx, ny, std::vector<double>(perimeter(nx, ny))};
    for (std::size_t k = 0; k < b.values.size(); ++k) {
      const std::size_t idx = b.index(k);
      b.values[k] = g(x0 + h * static_cast<double>(idx % nx), y0 + h * static_cast<double>(idx / nx));
    }
    return b;
  }
};

struct RelaxOptions {
  double tol = 1e-10;               ///< stop when the max update of a sweep is below this
  std::size_t max_iters = 100000;   ///< sweeps
  double h = 0.0;                   ///< spacing; 0 means 1 / (nx - 1)
  double x0 = 0.0;
  double y0 = 0.0;
};

struct RelaxResult {
  GridFunction u;
  bool converged = false;
  std::size_t sweeps = 0;
  double last_update = 0.0;
  std::vector<double> energy;     ///< after each sweep, starting with the initial guess
  bool energy_monotone = true;    ///< energy never increased beyond rounding
};

namespace detail {

// |x|^e with multiplication for the small integer exponents used by p = 2, 3, 4.
inline double abs_pow(double x, double e) {
  const double a = std::abs(x);
  if (e == 0.0) return 1.0;
  if (e == 1.0) return a;
  if (e == 2.0) return a * a;
  if (e == 3.0) return a * a * a;
  return std::pow(a, e);
}

// argmin_v sum_j |v - n_j|^p over the four neighbour values.
inline double local_minimizer(const double (&nb)[4], double p, double start) {
  if (p == 2.0) return 0.25 * ((nb[0] + nb[1]) + (nb[2] + nb[3]));
  double lo = std::min({nb[0], nb[1], nb[2], nb[3]});
  double hi = std::max({nb[0], nb[1], nb[2], nb[3]});
  if (lo == hi) return lo;
  double v = std::clamp(start, lo, hi);
  for (int it = 0; it < 200; ++it) {
    double g = 0.0;
    double curv = 0.0;
    for (double n : nb) {
      const double d = v - n;
      const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
      g += s * abs_pow(d, p - 1.0);
      curv += abs_pow(d, p - 2.0);
    }
    if (g == 0.0) return v;
    if (g > 0.0) hi = v; else lo = v;
    double next = v - g / ((p - 1.0) * curv);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - v) <= 1e-16 * (1.0 + std::abs(v)) || hi - lo <= 1e-16 * (1.0 + std::abs(v))) {
      return next;
    }
    v = next;
  }
  return v;
}

inline double pl_energy(const std::vector<double>& u, std::size_t nx, std::size_t ny, double p) {
  double e = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      if (i + 1 < nx && (j > 0 && j + 1 < ny)) e += abs_pow(u[k] - u[k + 1], p);
      if (j + 1 < ny && (i > 0 && i + 1 < nx)) e += abs_pow(u[k] - u[k + nx], p);
    }
  }
  return e;
}

}  // namespace detail

/// Gauss-Seidel relaxation of the discrete p-Laplacian on a rectangle with
/// Dirichlet data: each interior node in turn is set to the exact minimizer
/// of sum over its four neighbours of |u_i - u_j|^p. Stops when a full sweep
/// moves no node by more than tol. The initial guess is the transfinite
/// (Coons) interpolant of the boundary data, exact for linear data.
inline RelaxResult relax_p(const BoundaryData& g, double p, const RelaxOptions& opt = {}) {
  g.validate();
  detail::require(std::isfinite(p) && p > 1.0 && p <= 8.0, "relax_p: p must lie in (1, 8]");
  const std::size_t nx = g.nx;
  const std::size_t ny = g.ny;
  std::vector<double> u(nx * ny, 0.0);
  for (std::size_t k = 0; k < g.values.size(); ++k) u[g.index(k)] = g.values[k];

  // Coons patch.
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(ny - 1);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(nx - 1);
      const double left = u[j * nx], right = u[j * nx + nx - 1];
      const double bottom = u[i], top = u[(ny - 1) * nx + i];
      const double c00 = u[0], c10 = u[nx - 1], c01 = u[(ny - 1) * nx], c11 = u[ny * nx - 1];
      u[j * nx + i] = (1 - s) * left + s * right + (1 - t) * bottom + t * top -
                      ((1 - s) * (1 - t) * c00 + s * (1 - t) * c10 + (1 - s) * t * c01 + s * t * c11);
    }
  }

  RelaxResult r{GridFunction::plane(std::vector<double>(nx * ny, 0.0), nx, ny, 1.0), false, 0, 0.0,
                {}, true};
  r.energy.push_back(detail::pl_energy(u, nx, ny, p));
  while (r.sweeps < opt.max_iters) {
    double biggest = 0.0;
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        const std::size_t k = j * nx + i;
        const double nb[4] = {u[k - 1], u[k + 1], u[k - nx], u[k + nx]};
        const double v = detail::local_minimizer(nb, p, u[k]);
        biggest = std::max(biggest, std::abs(v - u[k]));
        u[k] = v;
      }
    }
    ++r.sweeps;
    r.last_update = biggest;
    const double e = detail::pl_energy(u, nx, ny, p);
    if (e > r.energy.back() * (1.0 + 1e-12) + 1e-300) r.energy_monotone = false;
    r.energy.push_back(e);
    if (biggest < opt.tol) {
      r.converged = true;
      break;
    }
  }
  const double h = opt.h > 0.0 ? opt.h : 1.0 / static_cast<double>(nx - 1);
  r.u = GridFunction::plane(std::move(u), nx, ny, h, opt.x0, opt.y0);
  return r;
}

// ---------------------------------------------------------------------------
// Discrete grand Sobolev norm
// ---------------------------------------------------------------------------

/// |grad u| by central differences (one-sided on the boundary), one atom of
/// measure h^2 per node.
inline StepFunction gradient_magnitude(const GridFunction& u) {
  detail::require(u.dim() == 2, "gradient_magnitude: 2D grid required");
  const std::size_t nx = u.nx();
  const std::size_t ny = u.ny();
  const double h = u.h();
  std::vector<Atom> atoms;
  atoms.reserve(u.size());
  auto diff = [&](std::size_t a, std::size_t b, double span) { return (u[b] - u[a]) / span; };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      double gx, gy;
      if (i == 0) gx = diff(k, k + 1, h);
      else if (i + 1 == nx) gx = diff(k - 1, k, h);
      else gx = diff(k - 1, k + 1, 2.0 * h);
      if (j == 0) gy = diff(k, k + nx, h);
      else if (j + 1 == ny) gy = diff(k - nx, k, h);
      else gy = diff(k - nx, k + nx, 2.0 * h);
      atoms.push_back({std::hypot(gx, gy), h * h});
    }
  }
  return StepFunction(std::move(atoms));
}

/// ||grad u||_{theta,inf)} of the discrete gradient.
inline NormReport grand_sobolev_norm(const GridFunction& u, double theta,
                                     const PGrid& grid = PGrid(),
                                     double rel_tol = kDefaultRelTol) {
  return grand_theta_infty_norm(gradient_magnitude(u), theta, grid, rel_tol);
}

}  // namespace grandnorm

#endif  // GRANDNORM_MONOTONICITY_HPP
