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
#ifndef GRANDNORM_VERIFY_HPP
#define GRANDNORM_VERIFY_HPP

// Numerical checks of the structural results about L^{theta,inf)}: norm
// axioms, the inclusion chain, weak/strong equivalence and the EXP
// equivalence. Failures are reported in the returned structs, never thrown.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "grandnorm/generators.hpp"
#include "grandnorm/norms.hpp"
#include "grandnorm/pgrid.hpp"
#include "grandnorm/step_function.hpp"

namespace grandnorm {

// ---------------------------------------------------------------------------
// Weak/strong equivalence
// ---------------------------------------------------------------------------

struct EquivalenceReport {
  double theta = 0.0;

  // (a) split-integral bound: ||f||_s <= (p/(p-s))^(1/s) M_p(f) for grid s < p.
  std::size_t split_pairs = 0;
  std::size_t split_violations = 0;
  double split_worst_ratio = 0.0;  ///< max of lhs / rhs; <= 1 passes
  double split_worst_s = 0.0;
  double split_worst_p = 0.0;

  // (b) M_p(f) <= ||f||_p at every grid p, no tolerance.
  std::size_t domination_violations = 0;
  double domination_worst_ratio = 0.0;

  // (c) sup_s s^-theta ||f||_s <= max{||f||_2, 4 sup_s M_s / s^theta}.
  double grand_value = 0.0;
  double weak_value = 0.0;        ///< sup over the grid and the shifted grid p + 1
  double l2_mean = 0.0;
  double chain_bound = 0.0;
  double chain_ratio = 0.0;       ///< grand_value / chain_bound; <= 1 passes

  /// Largest observed grand / weak ratio (the empirical equivalence constant).
  double observed_constant = 0.0;

  bool split_passed() const { return split_violations == 0; }
  bool domination_passed() const { return domination_violations == 0; }
  bool chain_passed() const { return chain_ratio <= 1.0; }
  bool passed() const { return split_passed() && domination_passed() && chain_passed(); }
};

inline EquivalenceReport verify_equivalence(const StepFunction& f, double theta,
                                            const PGrid& grid = PGrid()) {
  detail::require(std::isfinite(theta) && theta >= 0.0, "verify_equivalence: theta < 0");
  EquivalenceReport r;
  r.theta = theta;
  if (f.is_zero()) return r;

  const auto pts = grid.points();
  const std::vector<double> strong = lp_curve(f, grid);
  const std::vector<double> weak = weak_curve(f, grid);

  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double ratio = weak[k] / strong[k];
    r.domination_worst_ratio = std::max(r.domination_worst_ratio, ratio);
    if (weak[k] > strong[k]) ++r.domination_violations;
  }

  for (std::size_t j = 0; j < pts.size(); ++j) {      // s
    for (std::size_t k = j + 1; k < pts.size(); ++k) {  // p > s
      const double s = pts[j];
      const double p = pts[k];
      const double bound = std::pow(p / (p - s), 1.0 / s) * weak[k];
      const double ratio = strong[j] / bound;
      ++r.split_pairs;
      if (ratio > r.split_worst_ratio) {
        r.split_worst_ratio = ratio;
        r.split_worst_s = s;
        r.split_worst_p = p;
      }
      if (strong[j] > bound) ++r.split_violations;
    }
  }

  double grand = 0.0;
  double weak_sup = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    grand = std::max(grand, std::pow(pts[k], -theta) * strong[k]);
    weak_sup = std::max(weak_sup, std::pow(pts[k], -theta) * weak[k]);
    // The chain compares ||f||_s with M_{s+1}; include those exponents.
    const double shifted = pts[k] + 1.0;
    weak_sup = std::max(weak_sup, std::pow(shifted, -theta) * weak_lp_quasinorm(f, shifted));
  }
  r.grand_value = grand;
  r.weak_value = weak_sup;
  r.l2_mean = lp_mean(f, 2.0);
  r.chain_bound = std::max(r.l2_mean, 4.0 * weak_sup);
  r.chain_ratio = grand / r.chain_bound;
  r.observed_constant = weak_sup > 0.0 ? grand / weak_sup : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Norm axioms
// ---------------------------------------------------------------------------

struct AxiomReport {
  std::size_t pairs = 0;
  std::size_t triangle_violations = 0;
  std::size_t homogeneity_violations = 0;
  std::size_t definiteness_violations = 0;
  double worst_triangle_ratio = 0.0;   ///< max ||f+g|| / (||f|| + ||g||)
  double worst_homogeneity_error = 0.0;  ///< max relative error of ||a f|| vs |a| ||f||

  std::size_t violations() const {
    return triangle_violations + homogeneity_violations + definiteness_violations;
  }
  bool passed() const { return violations() == 0; }
};

/// Triangle inequality (slack 1e-10 relative), homogeneity (1e-12 relative)
/// and definiteness of ||.||_{theta,inf)} for each pair and each scalar.
inline AxiomReport verify_norm_axioms(std::span<const std::pair<StepFunction, StepFunction>> pairs,
                                      std::span<const double> thetas,
                                      const PGrid& grid = PGrid(),
                                      std::span<const double> scalars = {}) {
  static constexpr double kDefaultScalars[] = {-3.0, -1.0, 0.5, 2.0, 1e-3, 7.25};
  if (scalars.empty()) scalars = kDefaultScalars;
  AxiomReport r;
  auto norm_from = [&](const StepFunction& f, const std::vector<double>& curve, double theta) {
    return theta_sup_report(curve, f.max_abs(), theta, grid, kDefaultRelTol,
                            !f.is_zero() && detail::flat_modulus(f))
        .value;
  };
  for (const auto& [f, g] : pairs) {
    ++r.pairs;
    const StepFunction h = sum_on_shared_partition(f, g);
    const auto cf = lp_curve(f, grid);
    const auto cg = lp_curve(g, grid);
    const auto ch = lp_curve(h, grid);
    std::vector<std::pair<StepFunction, std::vector<double>>> scaled;
    for (double a : scalars) {
      StepFunction fa = f.scaled(a);
      auto ca = lp_curve(fa, grid);
      scaled.emplace_back(std::move(fa), std::move(ca));
    }
    for (double theta : thetas) {
      const double nf = norm_from(f, cf, theta);
      const double ng = norm_from(g, cg, theta);
      const double nh = norm_from(h, ch, theta);
      const double sum = nf + ng;
      if (sum > 0.0) r.worst_triangle_ratio = std::max(r.worst_triangle_ratio, nh / sum);
      if (nh > sum + 1e-10 * sum) ++r.triangle_violations;

      if ((nf == 0.0) != f.is_zero()) ++r.definiteness_violations;
      if ((nh == 0.0) != h.is_zero()) ++r.definiteness_violations;

      for (std::size_t i = 0; i < scalars.size(); ++i) {
        const double na = norm_from(scaled[i].first, scaled[i].second, theta);
        const double expect = std::abs(scalars[i]) * nf;
        const double err = expect > 0.0 ? std::abs(na - expect) / expect : std::abs(na);
        r.worst_homogeneity_error = std::max(r.worst_homogeneity_error, err);
        if (err > 1e-12) ++r.homogeneity_violations;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Inclusions
// ---------------------------------------------------------------------------

struct InclusionReport {
  double theta = 0.0;
  double theta_prime = 0.0;
  double norm_theta_prime = 0.0;  ///< ||f||_{theta',inf)}
  double norm_theta = 0.0;        ///< ||f||_{theta,inf)}
  double sup_norm = 0.0;          ///< ||f||_{0,inf)} = max|f|
  double q = 0.0;                 ///< grid exponent used for the L^q check
  double lq_mean = 0.0;
  double lq_bound = 0.0;          ///< q^theta' ||f||_{theta',inf)}
  bool ordered = false;
  bool lq_bounded = false;
  bool passed() const { return ordered && lq_bounded; }
};

/// ||f||_{theta',inf)} <= ||f||_{theta,inf)} <= max|f| for theta < theta', and
/// ||f||_q <= q^theta' ||f||_{theta',inf)} with q snapped up to the grid.
inline InclusionReport verify_inclusions(const StepFunction& f, double theta, double theta_prime,
                                         double q, const PGrid& grid = PGrid()) {
  detail::require(theta >= 0.0 && theta < theta_prime, "verify_inclusions: need 0 <= theta < theta'");
  detail::require(q >= 1.0 && q <= grid.p_max(), "verify_inclusions: q must lie in [1, p_max]");
  InclusionReport r;
  r.theta = theta;
  r.theta_prime = theta_prime;
  const auto curve = lp_curve(f, grid);
  const bool flat = !f.is_zero() && detail::flat_modulus(f);
  r.norm_theta_prime = theta_sup_report(curve, f.max_abs(), theta_prime, grid, kDefaultRelTol, flat).value;
  r.norm_theta = theta_sup_report(curve, f.max_abs(), theta, grid, kDefaultRelTol, flat).value;
  r.sup_norm = f.max_abs();
  r.ordered = r.norm_theta_prime <= r.norm_theta && r.norm_theta <= r.sup_norm;

  const auto pts = grid.points();
  const auto it = std::lower_bound(pts.begin(), pts.end(), q);
  const std::size_t k = static_cast<std::size_t>(std::distance(pts.begin(), it));
  r.q = pts[k];
  r.lq_mean = curve[k];
  r.lq_bound = std::pow(r.q, theta_prime) * r.norm_theta_prime;
  r.lq_bounded = r.lq_mean <= r.lq_bound * (1.0 + 1e-12);
  return r;
}

struct WitnessPoint {
  std::size_t n = 0;
  double grand_value = 0.0;
  double sup_norm = 0.0;
};

/// (-ln x)^theta at increasing resolutions: the grand norm stays bounded while
/// the sup norm of the discretization keeps growing.
struct ProperInclusionWitness {
  double theta = 0.0;
  std::vector<WitnessPoint> points;

  bool grand_bounded(double bound) const {
    return std::all_of(points.begin(), points.end(),
                       [bound](const WitnessPoint& w) { return w.grand_value <= bound; });
  }
  bool sup_growing() const {
    for (std::size_t k = 1; k < points.size(); ++k) {
      if (!(points[k].sup_norm > points[k - 1].sup_norm)) return false;
    }
    return points.size() >= 2;
  }
};

inline ProperInclusionWitness witness_log_power(double theta, std::span<const std::size_t> resolutions,
                                                const PGrid& grid = PGrid()) {
  ProperInclusionWitness w;
  w.theta = theta;
  for (std::size_t n : resolutions) {
    const StepFunction f = discretize(AnalyticFunctionSpec::log_power(theta, n));
    w.points.push_back({n, grand_theta_infty_norm(f, theta, grid).value, f.max_abs()});
  }
  return w;
}

// ---------------------------------------------------------------------------
// Layer cake over a corpus
// ---------------------------------------------------------------------------

struct LayerCakeSweep {
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst_discrepancy = 0.0;
  bool passed() const { return violations == 0; }
};

inline LayerCakeSweep verify_layer_cake(std::span<const StepFunction> corpus,
                                        std::span<const double> exponents, double tol = 1e-10) {
  LayerCakeSweep r;
  for (const StepFunction& f : corpus) {
    for (double s : exponents) {
      const double d = layer_cake(f, s).relative_discrepancy();
      ++r.cases;
      r.worst_discrepancy = std::max(r.worst_discrepancy, d);
      if (!(d <= tol)) ++r.violations;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// EXP equivalence
// ---------------------------------------------------------------------------

struct ExpRatio {
  AnalyticFunctionSpec spec;
  double grand_coarse = 0.0;
  double exp_coarse = 0.0;
  double grand_fine = 0.0;
  double exp_fine = 0.0;
  double ratio_coarse() const { return grand_coarse / exp_coarse; }
  double ratio_fine() const { return grand_fine / exp_fine; }
  double drift() const { return std::abs(ratio_fine() / ratio_coarse() - 1.0); }
};

struct ExpEquivalenceReport {
  std::vector<ExpRatio> entries;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  double worst_drift = 0.0;
  bool stable(double tol) const { return worst_drift <= tol; }
};

/// Functions in EXP used for the equivalence sweep. Each entry is discretized
/// at its own n and at 2n.
inline std::vector<AnalyticFunctionSpec> exp_corpus(std::size_t n) {
  return {AnalyticFunctionSpec::log_power(1.0, n),  AnalyticFunctionSpec::log_power(0.75, n),
          AnalyticFunctionSpec::log_power(0.5, n),  AnalyticFunctionSpec::log_power(0.25, n),
          AnalyticFunctionSpec::constant(3.0, n),   AnalyticFunctionSpec::indicator(0.0, 0.3, n),
          AnalyticFunctionSpec::indicator(0.2, 0.7, n)};
}

/// The analytic corpus: every closed-form generator kind, plus seeded random
/// step functions.
inline std::vector<AnalyticFunctionSpec> analytic_corpus(std::size_t n, std::uint64_t seed = 1) {
  auto specs = exp_corpus(n);
  specs.push_back(AnalyticFunctionSpec::power(-0.3, n));
  specs.push_back(AnalyticFunctionSpec::power(2.0, n));
  for (std::uint64_t k = 0; k < 3; ++k) {
    specs.push_back(AnalyticFunctionSpec::random_step(derive_seed(seed, k), std::min<std::size_t>(n, 256)));
  }
  return specs;
}

/// ||f||_{1,inf)} / ||f||_EXP over a corpus, at n and 2n.
inline ExpEquivalenceReport verify_exp_equivalence(std::span<const AnalyticFunctionSpec> corpus,
                                                   const PGrid& grid = PGrid()) {
  ExpEquivalenceReport r;
  for (const AnalyticFunctionSpec& spec : corpus) {
    ExpRatio e;
    e.spec = spec;
    const StepFunction coarse = discretize(spec);
    AnalyticFunctionSpec fine_spec = spec;
    fine_spec.n = spec.n * 2;
    const StepFunction fine = discretize(fine_spec);
    e.grand_coarse = grand_theta_infty_norm(coarse, 1.0, grid).value;
    e.exp_coarse = exp_class_norm(coarse);
    e.grand_fine = grand_theta_infty_norm(fine, 1.0, grid).value;
    e.exp_fine = exp_class_norm(fine);
    r.min_ratio = std::min({r.min_ratio, e.ratio_coarse(), e.ratio_fine()});
    r.max_ratio = std::max({r.max_ratio, e.ratio_coarse(), e.ratio_fine()});
    r.worst_drift = std::max(r.worst_drift, e.drift());
    r.entries.push_back(std::move(e));
  }
  return r;
}

}  // namespace grandnorm

#endif  // GRANDNORM_VERIFY_HPP
