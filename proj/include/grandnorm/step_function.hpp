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
#ifndef GRANDNORM_STEP_FUNCTION_HPP
#define GRANDNORM_STEP_FUNCTION_HPP

// Exact calculus of simple functions on a finite measure space.
//
// A StepFunction is a finite list of atoms (value, measure). Every integral
// used by the norms in this library has a closed form on such functions, so
// no quadrature error enters the verification suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "grandnorm/error.hpp"

namespace grandnorm {

struct Atom {
  double value;
  double measure;
};

class StepFunction {
 public:
  /// Total measure is the sum of the atom measures.
  explicit StepFunction(std::vector<Atom> atoms)
      : atoms_(std::move(atoms)) {
    validate_atoms();
    total_ = 0.0;
    for (const Atom& a : atoms_) total_ += a.measure;
    finish();
  }

  /// Total measure given explicitly; must agree with the atom sum to 1e-12.
  StepFunction(std::vector<Atom> atoms, double total_measure)
      : atoms_(std::move(atoms)), total_(total_measure) {
    validate_atoms();
    detail::require(std::isfinite(total_measure) && total_measure > 0.0,
                    "StepFunction: total measure must be positive");
    double sum = 0.0;
    for (const Atom& a : atoms_) sum += a.measure;
    detail::require(std::abs(sum - total_) <= 1e-12 * total_,
                    "StepFunction: atom measures do not sum to the total measure");
    finish();
  }

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total_measure() const noexcept { return total_; }
  double max_abs() const noexcept { return max_abs_; }
  bool is_zero() const noexcept { return max_abs_ == 0.0; }

  /// Atom indices sorted by |value| descending (stable). Every sum over atoms
  /// in this library runs in this order so that related quantities share
  /// rounding.
  std::span<const std::size_t> descending_order() const noexcept { return order_; }

  StepFunction scaled(double alpha) const {
    std::vector<Atom> out(atoms_);
    for (Atom& a : out) a.value *= alpha;
    return StepFunction(std::move(out), total_);
  }

  /// Merges atoms with equal values. Never applied implicitly.
  StepFunction merged() const {
    std::vector<Atom> sorted(atoms_);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> out;
    for (const Atom& a : sorted) {
      if (!out.empty() && out.back().value == a.value) {
        out.back().measure += a.measure;
      } else {
        out.push_back(a);
      }
    }
    return StepFunction(std::move(out), total_);
  }

 private:
  void validate_atoms() const {
    detail::require(!atoms_.empty(), "StepFunction: at least one atom is required");
    for (const Atom& a : atoms_) {
      detail::require(std::isfinite(a.value), "StepFunction: atom value must be finite");
      detail::require(std::isfinite(a.measure) && a.measure > 0.0,
                      "StepFunction: atom measure must be positive");
    }
  }

  void finish() {
    order_.resize(atoms_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
      return std::abs(atoms_[a].value) > std::abs(atoms_[b].value);
    });
    max_abs_ = std::abs(atoms_[order_.front()].value);
  }

  std::vector<Atom> atoms_;
  double total_ = 0.0;
  double max_abs_ = 0.0;
  std::vector<std::size_t> order_;
};

/// Pointwise sum of two step functions on the same partition (equal atom
/// counts and measures, atom by atom).
inline StepFunction sum_on_shared_partition(const StepFunction& f, const StepFunction& g) {
  detail::require(f.size() == g.size(), "sum: partitions differ in atom count");
  std::vector<Atom> out(f.atoms().begin(), f.atoms().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double mf = f.atoms()[i].measure;
    const double mg = g.atoms()[i].measure;
    detail::require(std::abs(mf - mg) <= 1e-12 * std::max(mf, mg),
                    "sum: partitions differ in atom measure");
    out[i].value += g.atoms()[i].value;
  }
  return StepFunction(std::move(out), f.total_measure());
}

// ---------------------------------------------------------------------------
// L^p means
// ---------------------------------------------------------------------------

/// Unnormalized scaled power sum: sum_i (|v_i| / max|v|)^p mu_i, in descending
/// |value| order. Shared by lp_mean and the weak quasi-norm.
namespace detail {
inline double scaled_power_sum(const StepFunction& f, double p) {
  const double top = f.max_abs();
  double acc = 0.0;
  for (std::size_t i : f.descending_order()) {
    const Atom& a = f.atoms()[i];
    if (a.value == 0.0) break;
    acc += std::pow(std::abs(a.value) / top, p) * a.measure;
  }
  return acc;
}
}  // namespace detail

/// (mean over Omega of |f|^p)^(1/p), p >= 1.
///
/// Evaluated as max|v| * (sum (|v_i|/max|v|)^p mu_i / |Omega|)^(1/p), which is
/// the max-shifted log-sum-exp form; it does not overflow for p up to 1e4 and
/// beyond.
inline double lp_mean(const StepFunction& f, double p) {
  detail::require(std::isfinite(p) && p >= 1.0, "lp_mean: p must be finite and >= 1");
  if (f.is_zero()) return 0.0;
  const double s = detail::scaled_power_sum(f, p);
  return f.max_abs() * std::pow(s / f.total_measure(), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Distribution function and rearrangement
// ---------------------------------------------------------------------------

struct LevelBreakpoint {
  double threshold;  ///< t
  double measure;    ///< |{|f| > t}|, constant until the next threshold
};

/// Right-continuous, nonincreasing step function t -> |{|f| > t}| on t >= 0.
class DistributionFunction {
 public:
  explicit DistributionFunction(std::vector<LevelBreakpoint> breakpoints)
      : breakpoints_(std::move(breakpoints)) {
    detail::require(!breakpoints_.empty() && breakpoints_.front().threshold == 0.0,
                    "DistributionFunction: first breakpoint must be at t = 0");
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
      detail::require(breakpoints_[k].threshold > breakpoints_[k - 1].threshold,
                      "DistributionFunction: thresholds must increase");
      detail::require(breakpoints_[k].measure <= breakpoints_[k - 1].measure,
                      "DistributionFunction: measures must not increase");
    }
  }

  std::span<const LevelBreakpoint> breakpoints() const noexcept { return breakpoints_; }

  double operator()(double t) const {
    if (t < 0.0) return breakpoints_.front().measure;
    auto it = std::upper_bound(
        breakpoints_.begin(), breakpoints_.end(), t,
        [](double x, const LevelBreakpoint& b) { return x < b.threshold; });
    return std::prev(it)->measure;
  }

  friend bool operator==(const DistributionFunction& a, const DistributionFunction& b) {
    return std::equal(a.breakpoints_.begin(), a.breakpoints_.end(), b.breakpoints_.begin(),
                      b.breakpoints_.end(), [](const LevelBreakpoint& x, const LevelBreakpoint& y) {
                        return x.threshold == y.threshold && x.measure == y.measure;
                      });
  }

 private:
  std::vector<LevelBreakpoint> breakpoints_;
};

struct Plateau {
  double length;
  double value;
};

/// Nonincreasing rearrangement f* on [0, |Omega|), stored as plateaus.
class Rearrangement {
 public:
  Rearrangement(std::vector<Plateau> plateaus, double domain_length)
      : plateaus_(std::move(plateaus)), domain_(domain_length) {
    detail::require(!plateaus_.empty(), "Rearrangement: no plateaus");
    double sum = 0.0;
    for (std::size_t k = 0; k < plateaus_.size(); ++k) {
      detail::require(plateaus_[k].length > 0.0 && plateaus_[k].value >= 0.0,
                      "Rearrangement: invalid plateau");
      if (k > 0) {
        detail::require(plateaus_[k].value <= plateaus_[k - 1].value,
                        "Rearrangement: values must be nonincreasing");
      }
      sum += plateaus_[k].length;
    }
    detail::require(std::abs(sum - domain_) <= 1e-12 * domain_,
                    "Rearrangement: plateau lengths must sum to the domain length");
    top_ = plateaus_.front().value;
  }

  std::span<const Plateau> plateaus() const noexcept { return plateaus_; }
  double domain_length() const noexcept { return domain_; }

  /// f*(s) for s in [0, |Omega|).
  double operator()(double s) const {
    double edge = 0.0;
    for (const Plateau& pl : plateaus_) {
      edge += pl.length;
      if (s < edge) return pl.value;
    }
    return plateaus_.back().value;
  }

  /// Cumulative integrals of (f*)^p: returns a callable giving
  /// (int_0^s (f*)^p)^(1/p) and (int_s^|Omega| (f*)^p)^(1/p), exact per plateau.
  /// Partial sums are kept as logarithms so plateaus spanning hundreds of
  /// decades neither underflow nor overflow.
  class PowerIntegrals {
   public:
    PowerIntegrals(const Rearrangement& r, double p) : p_(p) {
      const std::size_t n = r.plateaus_.size();
      edges_.reserve(n + 1);
      log_head_.reserve(n + 1);
      log_value_.reserve(n);
      edges_.push_back(0.0);
      log_head_.push_back(kNegInf);
      for (const Plateau& pl : r.plateaus_) {
        const double lv = pl.value > 0.0 ? std::log(pl.value) : kNegInf;
        log_value_.push_back(lv);
        edges_.push_back(edges_.back() + pl.length);
        log_head_.push_back(log_add(log_head_.back(), term(lv, pl.length)));
      }
      // Suffix sums computed directly; differencing the head would cancel near s = |Omega|.
      log_tail_.assign(n + 1, kNegInf);
      for (std::size_t k = n; k-- > 0;) {
        log_tail_[k] = log_add(log_tail_[k + 1], term(log_value_[k], r.plateaus_[k].length));
      }
    }

    double head_root(double s) const { return root(partial(s, true)); }
    double tail_root(double s) const { return root(partial(s, false)); }

   private:
    static constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    static double log_add(double a, double b) {
      if (a < b) std::swap(a, b);
      if (b == kNegInf) return a;
      return a + std::log1p(std::exp(b - a));
    }

    // log(v^p * len) from log v.
    double term(double log_v, double len) const {
      if (log_v == kNegInf || len <= 0.0) return kNegInf;
      return p_ * log_v + std::log(len);
    }

    double partial(double s, bool head) const {
      s = std::clamp(s, 0.0, edges_.back());
      auto it = std::upper_bound(edges_.begin(), edges_.end(), s);
      std::size_t k = static_cast<std::size_t>(std::distance(edges_.begin(), it));
      if (k == 0) k = 1;
      if (k >= edges_.size()) return head ? log_head_.back() : kNegInf;
      const std::size_t cell = k - 1;
      if (head) return log_add(log_head_[cell], term(log_value_[cell], s - edges_[cell]));
      return log_add(log_tail_[k], term(log_value_[cell], edges_[k] - s));
    }

    double root(double log_integral) const {
      if (log_integral == kNegInf) return 0.0;
      return std::exp(log_integral / p_);
    }

    double p_;
    std::vector<double> edges_;
    std::vector<double> log_head_;
    std::vector<double> log_tail_;
    std::vector<double> log_value_;
  };

  PowerIntegrals power_integrals(double p) const { return PowerIntegrals(*this, p); }

 private:
  std::vector<Plateau> plateaus_;
  double domain_;
  double top_ = 0.0;
};

/// f*(s): atoms sorted by |value| descending, one plateau per atom.
inline Rearrangement rearrangement(const StepFunction& f) {
  std::vector<Plateau> out;
  out.reserve(f.size());
  for (std::size_t i : f.descending_order()) {
    const Atom& a = f.atoms()[i];
    out.push_back({a.measure, std::abs(a.value)});
  }
  return Rearrangement(std::move(out), f.total_measure());
}

namespace detail {
// Accumulates level measures from the largest value downward; plateaus must
// be in nonincreasing value order.
template <class Levels>
DistributionFunction distribution_from_levels(const Levels& levels) {
  std::vector<LevelBreakpoint> desc;  // (threshold, measure above threshold)
  double above = 0.0;
  std::size_t k = 0;
  while (k < levels.size()) {
    const double v = levels[k].first;
    desc.push_back({v, above});
    while (k < levels.size() && levels[k].first == v) {
      above += levels[k].second;
      ++k;
    }
  }
  // desc holds f_*(t) for t in [v_k, v_{k-1}); the value below the smallest
  // level is the full accumulated measure.
  std::vector<LevelBreakpoint> out;
  out.reserve(desc.size() + 1);
  if (desc.empty() || desc.back().threshold > 0.0) out.push_back({0.0, above});
  for (auto it = desc.rbegin(); it != desc.rend(); ++it) out.push_back(*it);
  return DistributionFunction(std::move(out));
}
}  // namespace detail

/// f_*(t) = |{|f| > t}|, exact at every distinct |value|.
inline DistributionFunction distribution(const StepFunction& f) {
  std::vector<std::pair<double, double>> levels;
  levels.reserve(f.size());
  for (std::size_t i : f.descending_order()) {
    const Atom& a = f.atoms()[i];
    levels.emplace_back(std::abs(a.value), a.measure);
  }
  return detail::distribution_from_levels(levels);
}

inline DistributionFunction distribution(const Rearrangement& r) {
  std::vector<std::pair<double, double>> levels;
  levels.reserve(r.plateaus().size());
  for (const Plateau& pl : r.plateaus()) levels.emplace_back(pl.value, pl.length);
  return detail::distribution_from_levels(levels);
}

// ---------------------------------------------------------------------------
// Layer-cake identity
// ---------------------------------------------------------------------------

struct LayerCake {
  double lhs;            ///< sum_i |v_i|^s mu_i
  double rhs;            ///< s * int_0^inf t^(s-1) f_*(t) dt, closed form
  double total_measure;

  double mean_lhs() const { return lhs / total_measure; }
  double mean_rhs() const { return rhs / total_measure; }
  double relative_discrepancy() const {
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0);
  }
};

/// Both sides of int |f|^s = s int_0^inf t^(s-1) f_*(t) dt. The right side
/// integrates each constant piece of f_* exactly: (t_{k+1}^s - t_k^s) * mu_k.
inline LayerCake layer_cake(const StepFunction& f, double s) {
  detail::require(std::isfinite(s) && s >= 1.0, "layer_cake: s must be >= 1");
  double lhs = 0.0;
  for (const Atom& a : f.atoms()) lhs += std::pow(std::abs(a.value), s) * a.measure;

  const DistributionFunction dist = distribution(f);
  const auto bps = dist.breakpoints();
  double rhs = 0.0;
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    const double lo = std::pow(bps[k].threshold, s);
    const double hi = std::pow(bps[k + 1].threshold, s);
    rhs += (hi - lo) * bps[k].measure;
  }
  return {lhs, rhs, f.total_measure()};
}

}  // namespace grandnorm

#endif  // GRANDNORM_STEP_FUNCTION_HPP
