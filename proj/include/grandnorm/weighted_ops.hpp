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
#ifndef GRANDNORM_WEIGHTED_OPS_HPP
#define GRANDNORM_WEIGHTED_OPS_HPP

// Weights and classical operators on grid functions:
//
//   * doubling and Muckenhoupt A_p constants over dyadic cube families,
//   * weighted L^p means and the weighted grand norm,
//   * the weighted Hardy-Littlewood maximal operator (exact interval max),
//   * principal-value convolution with a Calderon-Zygmund kernel,
//   * empirical operator norms on L^{theta,inf)}_w.
//
// Cubes are restricted to the grid box; cubes that do not fit are skipped.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "grandnorm/error.hpp"
#include "grandnorm/generators.hpp"
#include "grandnorm/grid_function.hpp"
#include "grandnorm/norms.hpp"
#include "grandnorm/pgrid.hpp"

namespace grandnorm {

// ---------------------------------------------------------------------------
// Weighted norms
// ---------------------------------------------------------------------------

namespace detail {
inline void require_same_grid(const GridFunction& f, const Weight& w) {
  detail::require(f.same_geometry(w.grid()), "function and weight grids do not match");
}
}  // namespace detail

/// ((1/w(Omega)) sum |f_i|^p w_i h^dim)^(1/p).
inline double weighted_lp_norm(const GridFunction& f, const Weight& w, double p) {
  detail::require(std::isfinite(p) && p >= 1.0, "weighted_lp_norm: p must be >= 1");
  detail::require_same_grid(f, w);
  const double top = f.max_abs();
  if (top == 0.0) return 0.0;
  const double cell = f.cell_measure();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double wk = w[k] * cell;
    den += wk;
    if (f[k] != 0.0) num += std::pow(std::abs(f[k]) / top, p) * wk;
  }
  return top * std::pow(num / den, 1.0 / p);
}

inline std::vector<double> weighted_lp_curve(const GridFunction& f, const Weight& w,
                                             const PGrid& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double p : grid.points()) out.push_back(weighted_lp_norm(f, w, p));
  return out;
}

/// sup_p p^-theta ||f||_{p,w}; tail beyond p_max bounded by p_max^-theta max|f|.
inline NormReport weighted_grand_norm(const GridFunction& f, const Weight& w, double theta,
                                      const PGrid& grid = PGrid(),
                                      double rel_tol = kDefaultRelTol) {
  detail::require(std::isfinite(theta) && theta >= 0.0, "weighted_grand_norm: theta < 0");
  detail::require_same_grid(f, w);
  const double top = f.max_abs();
  bool flat = top > 0.0;
  for (double v : f.samples()) flat = flat && std::abs(v) == top;
  if (top == 0.0 || (theta == 0.0 && grid.policy() == TailPolicy::analytic_bound)) {
    return theta_sup_report(std::vector<double>(grid.size(), 0.0), top, theta, grid, rel_tol, flat);
  }
  return theta_sup_report(weighted_lp_curve(f, w, grid), top, theta, grid, rel_tol, flat);
}

// ---------------------------------------------------------------------------
// Dyadic cubes
// ---------------------------------------------------------------------------

/// Dyadic cubes: side 2^k cells, k in [log2(min_side), log2(max_side)],
/// aligned at multiples of the side. max_side = 0 means the largest power of
/// two that fits in the grid.
struct CubeFamily {
  std::size_t min_side = 1;
  std::size_t max_side = 0;
};

struct Cube {
  std::size_t i0 = 0;
  std::size_t j0 = 0;
  std::size_t side = 0;  ///< in cells
};

namespace detail {

struct Shape {
  int dim;
  std::size_t nx;
  std::size_t ny;
  std::size_t extent() const { return dim == 1 ? nx : std::min(nx, ny); }
};

inline Shape shape_of(const GridFunction& g) { return {g.dim(), g.nx(), g.ny()}; }

inline std::vector<std::size_t> dyadic_sides(const Shape& s, const CubeFamily& fam) {
  std::vector<std::size_t> out;
  const std::size_t cap = fam.max_side == 0 ? s.extent() : std::min(fam.max_side, s.extent());
  for (std::size_t side = 1; side <= cap; side *= 2) {
    if (side >= fam.min_side) out.push_back(side);
  }
  return out;
}

template <class Visit>
void for_each_cube(const Shape& s, std::size_t side, Visit&& visit) {
  const std::size_t ny = s.dim == 1 ? 1 : s.ny;
  const std::size_t jstep = s.dim == 1 ? 1 : side;
  for (std::size_t j0 = 0; j0 + (s.dim == 1 ? 1 : side) <= ny; j0 += jstep) {
    for (std::size_t i0 = 0; i0 + side <= s.nx; i0 += side) visit(Cube{i0, j0, side});
  }
}

template <class Cell>
void for_each_cell(const Shape& s, std::size_t i0, std::size_t j0, std::size_t side, Cell&& cell) {
  const std::size_t jn = s.dim == 1 ? 1 : side;
  for (std::size_t j = j0; j < j0 + jn; ++j) {
    for (std::size_t i = i0; i < i0 + side; ++i) cell(j * s.nx + i);
  }
}

// log of the mean of exp(x_k) over the cube cells.
template <class LogValue>
double log_mean(const Shape& s, const Cube& q, LogValue&& lv) {
  double top = -std::numeric_limits<double>::infinity();
  for_each_cell(s, q.i0, q.j0, q.side, [&](std::size_t k) { top = std::max(top, lv(k)); });
  double acc = 0.0;
  std::size_t count = 0;
  for_each_cell(s, q.i0, q.j0, q.side, [&](std::size_t k) {
    acc += std::exp(lv(k) - top);
    ++count;
  });
  return top + std::log(acc / static_cast<double>(count));
}

}  // namespace detail

struct DoublingReport {
  double constant = 0.0;  ///< max w(2Q) / w(Q)
  Cube witness;           ///< Q attaining the max
  std::size_t cubes_checked = 0;
};

/// max over dyadic Q (side >= 2) with 2Q inside the grid of w(2Q)/w(Q).
inline DoublingReport doubling_constant(const Weight& w, const CubeFamily& family = {}) {
  const auto s = detail::shape_of(w.grid());
  DoublingReport r;
  for (std::size_t side : detail::dyadic_sides(s, family)) {
    if (side < 2) continue;
    const std::size_t half = side / 2;
    detail::for_each_cube(s, side, [&](const Cube& q) {
      if (q.i0 < half || q.i0 + side + half > s.nx) return;
      if (s.dim == 2 && (q.j0 < half || q.j0 + side + half > s.ny)) return;
      double inner = 0.0;
      double outer = 0.0;
      detail::for_each_cell(s, q.i0, q.j0, q.side, [&](std::size_t k) { inner += w[k]; });
      detail::for_each_cell(s, q.i0 - half, s.dim == 2 ? q.j0 - half : 0, 2 * side,
                            [&](std::size_t k) { outer += w[k]; });
      const double ratio = outer / inner;  // h^dim cancels
      ++r.cubes_checked;
      if (ratio > r.constant) {
        r.constant = ratio;
        r.witness = q;
      }
    });
  }
  return r;
}

struct ApResolution {
  std::size_t cells_per_axis = 0;
  double constant = 0.0;
};

struct ApReport {
  double p = 2.0;
  double constant = 0.0;  ///< on the native grid; >= 1 up to rounding
  bool diverging = false;
  Cube witness;
  std::vector<std::size_t> sides;
  /// Constants on the grid pooled by 4, by 2 and native (coarse to fine).
  std::vector<ApResolution> resolutions;
  std::string note;
};

namespace detail {

inline double ap_scan(const Shape& s, std::span<const double> logw, double p,
                      const CubeFamily& family, Cube* witness,
                      std::vector<std::size_t>* sides_used) {
  const double dual = 1.0 - p / (p - 1.0);  // 1 - p'
  double best = 0.0;
  for (std::size_t side : dyadic_sides(s, family)) {
    if (sides_used) sides_used->push_back(side);
    for_each_cube(s, side, [&](const Cube& q) {
      const double lm = log_mean(s, q, [&](std::size_t k) { return logw[k]; });
      const double ld = log_mean(s, q, [&](std::size_t k) { return dual * logw[k]; });
      const double a = std::exp(lm + (p - 1.0) * ld);
      if (a > best) {
        best = a;
        if (witness) *witness = q;
      }
    });
  }
  return best;
}

// Block mean over 2 cells per axis.
inline std::vector<double> pool2(const Shape& s, std::span<const double> w, Shape* out) {
  const std::size_t nx = s.nx / 2;
  const std::size_t ny = s.dim == 1 ? 1 : s.ny / 2;
  std::vector<double> r(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (s.dim == 1) {
        r[i] = 0.5 * (w[2 * i] + w[2 * i + 1]);
      } else {
        const std::size_t a = (2 * j) * s.nx + 2 * i;
        const std::size_t b = (2 * j + 1) * s.nx + 2 * i;
        r[j * nx + i] = 0.25 * (w[a] + w[a + 1] + w[b] + w[b + 1]);
      }
    }
  }
  *out = {s.dim, nx, s.dim == 1 ? 1 : ny};
  return r;
}

inline std::vector<double> logs(std::span<const double> w) {
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = std::log(w[k]);
  return out;
}

}  // namespace detail

/// max over dyadic cubes of (mean_Q w)(mean_Q w^(1-p'))^(p-1), computed in
/// log domain. The weight is also pooled to half and quarter resolution; the
/// report is flagged diverging when the constant at least doubles across
/// those two refinements.
inline ApReport ap_constant(const Weight& w, double p, const CubeFamily& family = {}) {
  detail::require(std::isfinite(p) && p > 1.0, "ap_constant: p must be > 1");
  const auto s = detail::shape_of(w.grid());
  ApReport r;
  r.p = p;
  const auto native_logs = detail::logs(w.samples());
  r.constant = detail::ap_scan(s, native_logs, p, family, &r.witness, &r.sides);

  const bool poolable = s.nx % 4 == 0 && (s.dim == 1 || s.ny % 4 == 0) && s.extent() >= 16;
  if (!poolable) {
    r.resolutions.push_back({s.nx, r.constant});
    r.note = "grid not divisible by 4 (or too small); divergence not assessed";
    return r;
  }
  detail::Shape half_shape{};
  const auto half = detail::pool2(s, w.samples(), &half_shape);
  detail::Shape quarter_shape{};
  const auto quarter = detail::pool2(half_shape, half, &quarter_shape);
  const double a_quarter =
      detail::ap_scan(quarter_shape, detail::logs(quarter), p, family, nullptr, nullptr);
  const double a_half = detail::ap_scan(half_shape, detail::logs(half), p, family, nullptr, nullptr);
  r.resolutions = {{quarter_shape.nx, a_quarter}, {half_shape.nx, a_half}, {s.nx, r.constant}};
  r.diverging = r.constant >= 2.0 * a_quarter;
  return r;
}

// ---------------------------------------------------------------------------
// Maximal operator
// ---------------------------------------------------------------------------

/// (M_w f)_i = max over grid intervals Q containing i of
/// sum_Q |f_j| w_j / sum_Q w_j. Exact over all O(n^2) intervals; O(n) memory.
/// The singleton interval contributes |f_i| exactly, so M_w f >= |f|.
inline GridFunction maximal_operator(const GridFunction& f, const Weight& w) {
  detail::require(f.dim() == 1, "maximal_operator: only 1D grids are supported");
  detail::require_same_grid(f, w);
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  std::vector<double> avg(n);
  for (std::size_t a = 0; a < n; ++a) {
    double mass = 0.0;
    double wsum = 0.0;
    for (std::size_t b = a; b < n; ++b) {
      mass += std::abs(f[b]) * w[b];
      wsum += w[b];
      avg[b] = (b == a) ? std::abs(f[a]) : mass / wsum;
    }
    // suffix max over b >= i of avg(a, b) is the best interval starting at a
    // that contains i.
    double run = 0.0;
    for (std::size_t b = n; b-- > a;) {
      run = std::max(run, avg[b]);
      out[b] = std::max(out[b], run);
    }
  }
  return f.with_samples(std::move(out));
}

// ---------------------------------------------------------------------------
// Calderon-Zygmund operators
// ---------------------------------------------------------------------------

enum class KernelKind { hilbert, custom_power };

/// 1D kernel K(x) = c sgn(x)^odd |x|^-exponent. Hilbert: c = 1/pi,
/// exponent 1, odd.
struct KernelSpec {
  KernelKind kind = KernelKind::hilbert;
  double c = std::numbers::inv_pi;
  double exponent = 1.0;
  bool odd = true;
  double size_constant = std::numbers::inv_pi;  ///< C_K

  static KernelSpec hilbert() { return {}; }
  static KernelSpec custom_power(double c, double exponent, bool odd, double size_constant) {
    return {KernelKind::custom_power, c, exponent, odd, size_constant};
  }

  double operator()(double x) const {
    const double mag = c * std::pow(std::abs(x), -exponent);
    return (odd && x < 0.0) ? -mag : mag;
  }
  double derivative_magnitude(double x) const {
    return std::abs(c) * exponent * std::pow(std::abs(x), -exponent - 1.0);
  }
};

/// Rejects kernels whose p.v. integral is undefined (even with a
/// nonintegrable singularity) and kernels that violate the size or gradient
/// bounds at the sampled offsets.
inline void validate_kernel(const KernelSpec& k, double h, std::size_t n) {
  detail::require(std::isfinite(k.c) && std::isfinite(k.exponent) && k.exponent >= 0.0,
                  "kernel: invalid parameters");
  if (!k.odd && k.exponent >= 1.0) {
    detail::fail("kernel: even kernel with nonintegrable singularity; principal value undefined");
  }
  for (std::size_t d = 1; d < n; ++d) {
    const double x = h * static_cast<double>(d);
    const bool size_ok = std::abs(k(x)) * x <= k.size_constant * (1.0 + 1e-12);
    const bool grad_ok = k.derivative_magnitude(x) * x * x <= k.size_constant * (1.0 + 1e-12);
    if (!size_ok || !grad_ok) detail::fail("kernel: size or gradient bound violated");
  }
}

/// (Tf)_i = sum_{j != i} K(x_i - x_j) f_j h. Dropping the diagonal
/// symmetrically realizes the principal value for odd kernels.
inline GridFunction cz_apply(const GridFunction& f, const KernelSpec& k = KernelSpec::hilbert()) {
  detail::require(f.dim() == 1, "cz_apply: only 1D grids are supported");
  const std::size_t n = f.size();
  validate_kernel(k, f.h(), n);
  const double h = f.h();
  std::vector<double> kpos(n, 0.0);
  std::vector<double> kneg(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    const double x = h * static_cast<double>(d);
    kpos[d] = k(x) * h;
    kneg[d] = k(-x) * h;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += kpos[i - j] * f[j];
    for (std::size_t j = i + 1; j < n; ++j) acc += kneg[j - i] * f[j];
    out[i] = acc;
  }
  return f.with_samples(std::move(out));
}

// ---------------------------------------------------------------------------
// Random 1D corpora
// ---------------------------------------------------------------------------

/// Seeded random functions on [lo, hi], defined analytically so they can be
/// sampled at any resolution. smooth: sums of three Gaussian bumps centered in
/// the middle half of the interval. Otherwise: piecewise constant with six
/// random breakpoints.
struct GridCorpusSpec {
  std::uint64_t seed = 1;
  std::size_t count = 50;
  bool smooth = false;
  double lo = -4.0;
  double hi = 4.0;
};

/// Each function sampled at the n cell midpoints of [lo, hi].
inline std::vector<GridFunction> grid_corpus(const GridCorpusSpec& spec, std::size_t n) {
  detail::require(spec.hi > spec.lo, "grid_corpus: empty interval");
  const double h = (spec.hi - spec.lo) / static_cast<double>(n);
  const double mid = 0.5 * (spec.lo + spec.hi);
  const double quarter = 0.25 * (spec.hi - spec.lo);
  std::vector<GridFunction> out;
  out.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) {
    std::mt19937_64 rng(derive_seed(spec.seed, k));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
    if (spec.smooth) {
      double amp[3], centre[3], width[3];
      for (int b = 0; b < 3; ++b) {
        amp[b] = uniform(-2.0, 2.0);
        centre[b] = uniform(mid - quarter, mid + quarter);
        width[b] = uniform(0.05, 0.15) * (spec.hi - spec.lo);
      }
      out.push_back(GridFunction::sample_line(n, h, spec.lo + 0.5 * h, [&](double x) {
        double v = 0.0;
        for (int b = 0; b < 3; ++b) {
          const double z = (x - centre[b]) / width[b];
          v += amp[b] * std::exp(-z * z);
        }
        return v;
      }));
    } else {
      std::vector<double> cuts(6);
      for (double& c : cuts) c = uniform(spec.lo, spec.hi);
      std::sort(cuts.begin(), cuts.end());
      std::vector<double> values(cuts.size() + 1);
      for (double& v : values) v = uniform(-3.0, 3.0);
      out.push_back(GridFunction::sample_line(n, h, spec.lo + 0.5 * h, [&](double x) {
        const auto piece = std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin();
        return values[static_cast<std::size_t>(piece)];
      }));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator norm estimates
// ---------------------------------------------------------------------------

enum class OperatorKind { maximal, cz };

struct RatioPoint {
  double p;
  double ratio;  ///< max over the corpus of ||op f||_{p,w} / ||f||_{p,w}
};

struct OperatorNormReport {
  OperatorKind op = OperatorKind::maximal;
  double theta = 0.0;
  double max_ratio = 0.0;  ///< max over corpus of grand(op f) / grand(f)
  std::vector<double> entry_ratios;
  std::vector<RatioPoint> per_p;
  std::size_t skipped = 0;  ///< zero-norm corpus entries

  // cz only: Holder interpolation below q. For p < q the normalized weighted
  // means satisfy ||Tf||_p <= ||Tf||_q, hence
  // grand(Tf) <= q^theta sup_{p >= q} p^-theta ||Tf||_p.
  double holder_q = 0.0;
  std::size_t holder_violations = 0;
  double holder_worst_ratio = 0.0;
};

inline OperatorNormReport operator_norm_estimate(OperatorKind op, const Weight& w, double theta,
                                                 std::span<const GridFunction> corpus,
                                                 const PGrid& grid = PGrid(),
                                                 const KernelSpec& kernel = KernelSpec::hilbert(),
                                                 double holder_q = 2.0) {
  detail::require(!corpus.empty(), "operator_norm_estimate: corpus is empty");
  detail::require(std::isfinite(theta) && theta >= 0.0, "operator_norm_estimate: theta < 0");
  OperatorNormReport r;
  r.op = op;
  r.theta = theta;
  const auto pts = grid.points();
  r.per_p.reserve(pts.size());
  for (double p : pts) r.per_p.push_back({p, 0.0});
  if (op == OperatorKind::cz) r.holder_q = holder_q;

  for (const GridFunction& f : corpus) {
    const double nf = weighted_grand_norm(f, w, theta, grid).value;
    if (nf == 0.0) {
      ++r.skipped;
      continue;
    }
    const GridFunction g = op == OperatorKind::maximal ? maximal_operator(f, w) : cz_apply(f, kernel);
    const double ng = weighted_grand_norm(g, w, theta, grid).value;
    r.entry_ratios.push_back(ng / nf);
    r.max_ratio = std::max(r.max_ratio, ng / nf);

    const auto cf = weighted_lp_curve(f, w, grid);
    const auto cg = weighted_lp_curve(g, w, grid);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (cf[k] > 0.0) r.per_p[k].ratio = std::max(r.per_p[k].ratio, cg[k] / cf[k]);
    }

    if (op == OperatorKind::cz) {
      const double at_q = weighted_lp_norm(g, w, holder_q);
      double upper_sup = 0.0;
      double lower_sup = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double scaled = std::pow(pts[k], -theta) * cg[k];
        if (pts[k] < holder_q) {
          lower_sup = std::max(lower_sup, scaled);
          if (cg[k] > at_q * (1.0 + 1e-12)) ++r.holder_violations;
        } else {
          upper_sup = std::max(upper_sup, scaled);
        }
      }
      upper_sup = std::max(upper_sup, std::pow(holder_q, -theta) * at_q);
      const double bound = std::pow(holder_q, theta) * upper_sup;
      if (bound > 0.0) {
        const double ratio = std::max(lower_sup, upper_sup) / bound;
        r.holder_worst_ratio = std::max(r.holder_worst_ratio, ratio);
        if (ratio > 1.0 + 1e-12) ++r.holder_violations;
      }
    }
  }
  return r;
}

}  // namespace grandnorm

#endif  // GRANDNORM_WEIGHTED_OPS_HPP
