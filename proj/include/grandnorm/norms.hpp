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
#ifndef GRANDNORM_NORMS_HPP
#define GRANDNORM_NORMS_HPP

// Norms and quasi-norms on step functions:
//
//   grand L^{theta,inf)}   sup_{p>=1} p^-theta (mean |f|^p)^(1/p)
//   grand L^{theta,p)}     sup_{0<eps<=p-1} eps^(theta/p) ||f||_{p-eps}
//   small / grand Lebesgue norms through the decreasing rearrangement
//   EXP                    inf{lambda : mean exp(|f|/lambda) <= 2}
//   weak L^p               M_p(f) = (sup_t t^p f_*(t) / |Omega|)^(1/p)
//   weak L^{theta,inf}     sup_{p>=1} M_p(f) / p^theta
//
// All sups over exponents run over a PGrid; the tail beyond p_max is bounded
// analytically by p_max^-theta * max|f| because every mean is dominated by
// the sup norm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "grandnorm/error.hpp"
#include "grandnorm/pgrid.hpp"
#include "grandnorm/step_function.hpp"

namespace grandnorm {

// ---------------------------------------------------------------------------
// Weak L^p quasi-norm
// ---------------------------------------------------------------------------

/// M_p(f). The sup over t of t^p f_*(t) is approached from the left of a
/// breakpoint, so it is the max over distinct |values| v of v^p |{|f| >= v}|.
/// The running measure is accumulated in the same order as lp_mean's power
/// sum, which makes M_p(f) <= lp_mean(f, p) hold in floating point too.
inline double weak_lp_quasinorm(const StepFunction& f, double p) {
  detail::require(std::isfinite(p) && p >= 1.0, "weak_lp_quasinorm: p must be >= 1");
  if (f.is_zero()) return 0.0;
  const double top = f.max_abs();
  double level_measure = 0.0;
  double best = 0.0;
  for (std::size_t i : f.descending_order()) {
    const Atom& a = f.atoms()[i];
    if (a.value == 0.0) break;
    level_measure += a.measure;
    best = std::max(best, std::pow(std::abs(a.value) / top, p) * level_measure);
  }
  return top * std::pow(best / f.total_measure(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Sup over a p-grid
// ---------------------------------------------------------------------------

inline std::vector<double> lp_curve(const StepFunction& f, const PGrid& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double p : grid.points()) out.push_back(lp_mean(f, p));
  return out;
}

inline std::vector<double> weak_curve(const StepFunction& f, const PGrid& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double p : grid.points()) out.push_back(weak_lp_quasinorm(f, p));
  return out;
}

/// Turns a per-p curve c(p) (dominated by `sup_bound` = max|f|) into the
/// report for sup_p p^-theta c(p). `flat` means |f| is a.e. constant, so the
/// curve is constant and the theta = 0 sup is attained at p = 1.
inline NormReport theta_sup_report(std::span<const double> curve, double sup_bound, double theta,
                                   const PGrid& grid, double rel_tol, bool flat) {
  detail::require(std::isfinite(theta) && theta >= 0.0, "theta must be >= 0");
  detail::require(curve.size() == grid.size(), "curve does not match the grid");
  NormReport r;
  r.grid = describe(grid);
  if (sup_bound == 0.0) return r;  // zero function: every norm is 0

  const bool analytic = grid.policy() == TailPolicy::analytic_bound;
  if (theta == 0.0 && analytic) {
    r.value = sup_bound;
    r.argmax_exponent = flat ? 1.0 : std::numeric_limits<double>::infinity();
    r.tail_bound = 0.0;
    r.converged = true;
    return r;
  }

  const auto pts = grid.points();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double v = std::pow(pts[k], -theta) * curve[k];
    if (v > r.value) {  // strict: ties keep the smaller p
      r.value = v;
      r.argmax_exponent = pts[k];
    }
  }
  r.tail_bound = std::pow(grid.p_max(), -theta) * sup_bound;
  if (analytic) {
    r.converged = r.tail_bound <= rel_tol * r.value;
  } else {
    r.converged = false;
    r.note = "tail beyond p_max is not bounded";
  }
  return r;
}

namespace detail {
inline bool flat_modulus(const StepFunction& f) {
  const double top = f.max_abs();
  for (const Atom& a : f.atoms()) {
    if (std::abs(a.value) != top) return false;
  }
  return true;
}
}  // namespace detail

/// ||f||_{theta,inf)} = sup_{p>=1} p^-theta (mean |f|^p)^(1/p).
/// theta = 0 is returned in closed form as max|f|.
inline NormReport grand_theta_infty_norm(const StepFunction& f, double theta,
                                         const PGrid& grid = PGrid(),
                                         double rel_tol = kDefaultRelTol) {
  detail::require(std::isfinite(theta) && theta >= 0.0, "grand_theta_infty_norm: theta < 0");
  if (f.is_zero()) return theta_sup_report(std::vector<double>(grid.size(), 0.0), 0.0, theta,
                                           grid, rel_tol, true);
  if (theta == 0.0 && grid.policy() == TailPolicy::analytic_bound) {
    return theta_sup_report(std::vector<double>(grid.size(), 0.0), f.max_abs(), theta, grid,
                            rel_tol, detail::flat_modulus(f));
  }
  return theta_sup_report(lp_curve(f, grid), f.max_abs(), theta, grid, rel_tol,
                          detail::flat_modulus(f));
}

/// sup_{p>=1} M_p(f) / p^theta, theta = 0 in closed form (M_p -> max|f|).
inline NormReport weak_theta_norm(const StepFunction& f, double theta,
                                  const PGrid& grid = PGrid(),
                                  double rel_tol = kDefaultRelTol) {
  detail::require(std::isfinite(theta) && theta >= 0.0, "weak_theta_norm: theta < 0");
  if (f.is_zero()) return theta_sup_report(std::vector<double>(grid.size(), 0.0), 0.0, theta,
                                           grid, rel_tol, true);
  if (theta == 0.0 && grid.policy() == TailPolicy::analytic_bound) {
    return theta_sup_report(std::vector<double>(grid.size(), 0.0), f.max_abs(), theta, grid,
                            rel_tol, detail::flat_modulus(f));
  }
  return theta_sup_report(weak_curve(f, grid), f.max_abs(), theta, grid, rel_tol,
                          detail::flat_modulus(f));
}

// ---------------------------------------------------------------------------
// Grand L^p
// ---------------------------------------------------------------------------

enum class GrandLpForm {
  outer_weight,  ///< eps^(theta/p) * ||f||_{p-eps}
  inner_weight,  ///< (eps * mean |f|^(p-eps))^(1/(p-eps)), the classical theta = 1 form
};

/// Geometric grid over (0, p-1]: eps_k = (p-1) / ratio^k down to
/// (p-1) * min_fraction.
struct EpsGrid {
  double ratio = kDefaultRatio;
  double min_fraction = 1e-6;
};

inline NormReport grand_lp_norm(const StepFunction& f, double theta, double p,
                                const EpsGrid& eps_grid = {},
                                GrandLpForm form = GrandLpForm::outer_weight,
                                double rel_tol = kDefaultRelTol) {
  detail::require(std::isfinite(p) && p > 1.0, "grand_lp_norm: p must be > 1");
  detail::require(std::isfinite(theta) && theta >= 0.0, "grand_lp_norm: theta < 0");
  detail::require(eps_grid.ratio > 1.0 && eps_grid.min_fraction > 0.0 &&
                      eps_grid.min_fraction < 1.0,
                  "grand_lp_norm: invalid eps grid");
  NormReport r;
  r.grid = {1.0, p, eps_grid.ratio, 0};
  r.argmax_exponent = 1.0;
  if (f.is_zero()) return r;

  const double eps_max = p - 1.0;
  const double eps_min = eps_max * eps_grid.min_fraction;
  const double log_ratio = std::log(eps_grid.ratio);
  std::size_t n = 0;
  double eps_last = eps_max;
  for (std::size_t k = 0;; ++k) {
    double eps = eps_max * std::exp(-static_cast<double>(k) * log_ratio);
    if (eps < eps_min) eps = eps_min;
    const double q = p - eps;
    const double weight = form == GrandLpForm::outer_weight ? std::pow(eps, theta / p)
                                                            : std::pow(eps, 1.0 / q);
    const double v = weight * lp_mean(f, q);
    if (v > r.value) {
      r.value = v;
      r.argmax_exponent = q;
    }
    ++n;
    eps_last = eps;
    if (eps == eps_min) break;
  }
  r.grid.n = n;

  // Uncovered range eps in (0, eps_min): the mean is at most ||f||_p and the
  // weight is at most its value at eps_min.
  const double lp_top = lp_mean(f, p);
  const double weight_top = form == GrandLpForm::outer_weight
                                ? std::pow(eps_last, theta / p)
                                : (eps_last < 1.0 ? std::pow(eps_last, 1.0 / p)
                                                  : std::pow(eps_last, 1.0 / (p - eps_last)));
  r.tail_bound = std::max(0.0, weight_top * lp_top - r.value);
  r.converged = r.tail_bound <= rel_tol * r.value;
  return r;
}

// ---------------------------------------------------------------------------
// Rearrangement norms (|Omega| = 1)
// ---------------------------------------------------------------------------

/// Uniform grid in u = -ln t on [0, u_max]; u_max = 0 picks 50 (p + 1).
struct TGrid {
  double u_max = 0.0;
  std::size_t intervals = 20000;

  double resolved_u_max(double p) const { return u_max > 0.0 ? u_max : 50.0 * (p + 1.0); }
};

namespace detail {
inline void require_unit_measure(const StepFunction& f, const char* who) {
  if (std::abs(f.total_measure() - 1.0) > 1e-12) {
    fail(std::string(who) + ": total measure must be 1 (renormalize first)");
  }
}
}  // namespace detail

/// int_0^1 (1 - ln t)^(-1/p) (int_0^t (f*)^p ds)^(1/p) dt/t.
///
/// With t = e^-u the integral becomes int_0^inf (1+u)^(-1/p) F(e^-u)^(1/p) du,
/// evaluated by composite Simpson on the u-grid; F is exact per plateau.
inline double small_lp_norm(const StepFunction& f, double p, const TGrid& tg = {}) {
  detail::require(std::isfinite(p) && p > 1.0, "small_lp_norm: p must be > 1");
  detail::require_unit_measure(f, "small_lp_norm");
  if (f.is_zero()) return 0.0;
  const auto ints = rearrangement(f).power_integrals(p);
  std::size_t n = std::max<std::size_t>(tg.intervals, 2);
  if (n % 2 == 1) ++n;
  const double u_max = tg.resolved_u_max(p);
  const double h = u_max / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double u = h * static_cast<double>(k);
    const double g = std::pow(1.0 + u, -1.0 / p) * ints.head_root(std::exp(-u));
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * g;
  }
  return acc * h / 3.0;
}

/// sup_{0<t<1} (1 - ln t)^(-1/p) (int_t^1 (f*)^p ds)^(1/p) over the u-grid.
inline double grand_rearrangement_norm(const StepFunction& f, double p, const TGrid& tg = {}) {
  detail::require(std::isfinite(p) && p > 1.0, "grand_rearrangement_norm: p must be > 1");
  detail::require_unit_measure(f, "grand_rearrangement_norm");
  if (f.is_zero()) return 0.0;
  const auto ints = rearrangement(f).power_integrals(p);
  const std::size_t n = std::max<std::size_t>(tg.intervals, 2);
  const double u_max = tg.resolved_u_max(p);
  const double h = u_max / static_cast<double>(n);
  double best = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double u = h * static_cast<double>(k);
    best = std::max(best, std::pow(1.0 + u, -1.0 / p) * ints.tail_root(std::exp(-u)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exponential class
// ---------------------------------------------------------------------------

namespace detail {
// log of mean exp(|f| / lambda), max-shifted.
inline double log_mean_exp(const StepFunction& f, double lambda) {
  const double shift = f.max_abs() / lambda;
  double acc = 0.0;
  for (std::size_t i : f.descending_order()) {
    const Atom& a = f.atoms()[i];
    acc += std::exp(std::abs(a.value) / lambda - shift) * a.measure;
  }
  return shift + std::log(acc / f.total_measure());
}
}  // namespace detail

/// inf{lambda > 0 : mean exp(|f|/lambda) <= 2}, by bisection in log lambda to
/// relative tolerance 1e-10. Returns +inf if no lambda <= 1e6 max|f| works.
inline double exp_class_norm(const StepFunction& f) {
  if (f.is_zero()) return 0.0;
  const double top = f.max_abs();
  const double target = std::log(2.0);
  auto feasible = [&](double lambda) { return detail::log_mean_exp(f, lambda) <= target; };

  double hi = top / std::log(2.0) * (1.0 + f.total_measure());
  const double lambda_max = 1e6 * top;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (hi > lambda_max) return std::numeric_limits<double>::infinity();
  }
  double lo = top / 60.0;
  for (int guard = 0; feasible(lo) && guard < 4096; ++guard) lo /= 2.0;
  if (feasible(lo)) return lo;

  while (hi - lo > 1e-10 * hi) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace grandnorm

#endif  // GRANDNORM_NORMS_HPP
