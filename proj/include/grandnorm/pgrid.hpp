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
#ifndef GRANDNORM_PGRID_HPP
#define GRANDNORM_PGRID_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "grandnorm/error.hpp"

namespace grandnorm {

inline constexpr double kDefaultPMax = 1e4;
inline constexpr double kDefaultRatio = 1.05;
inline constexpr double kDefaultRelTol = 1e-2;

enum class TailPolicy {
  analytic_bound,  ///< tail beyond p_max bounded by p_max^-theta * max|f|
  report_only,     ///< no bound is claimed; reports are never marked converged
};

/// Geometric discretization of the exponent range [1, p_max].
///
/// Points are exp(k * log_ratio) for k = 0, 1, ... below p_max, with p_max
/// appended. refined() halves log_ratio exactly, so the refined grid contains
/// every point of the coarse one bit for bit.
class PGrid {
 public:
  explicit PGrid(double p_max = kDefaultPMax, double ratio = kDefaultRatio,
                 TailPolicy policy = TailPolicy::analytic_bound)
      : PGrid(p_max, std::log(ratio), policy, 0) {
    detail::require(std::isfinite(ratio) && ratio > 1.0, "PGrid: ratio must be > 1");
  }

  PGrid refined() const { return PGrid(p_max_, log_ratio_ / 2.0, policy_, 0); }

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double p_min() const noexcept { return 1.0; }
  double p_max() const noexcept { return p_max_; }
  double ratio() const noexcept { return std::exp(log_ratio_); }
  TailPolicy policy() const noexcept { return policy_; }

 private:
  PGrid(double p_max, double log_ratio, TailPolicy policy, int)
      : p_max_(p_max), log_ratio_(log_ratio), policy_(policy) {
    detail::require(std::isfinite(p_max) && p_max >= 1.0, "PGrid: p_max must be >= 1");
    detail::require(log_ratio > 0.0, "PGrid: ratio must be > 1");
    for (std::size_t k = 0;; ++k) {
      const double p = std::exp(static_cast<double>(k) * log_ratio_);
      if (p >= p_max_) break;
      points_.push_back(p);
    }
    points_.push_back(p_max_);
    detail::require(points_.size() >= 8,
                    "PGrid: fewer than 8 grid points; lower the ratio or raise p_max");
  }

  double p_max_;
  double log_ratio_;
  TailPolicy policy_;
  std::vector<double> points_;
};

struct GridDescriptor {
  double p_min = 1.0;
  double p_max = kDefaultPMax;
  double ratio = kDefaultRatio;
  std::size_t n = 0;
};

inline GridDescriptor describe(const PGrid& g) {
  return {g.p_min(), g.p_max(), g.ratio(), g.size()};
}

struct NormReport {
  double value = 0.0;
  /// Exponent where the sup was attained on the grid; +inf when the sup is
  /// the limit p -> infinity (theta = 0, nonconstant |f|).
  double argmax_exponent = 1.0;
  double tail_bound = 0.0;
  GridDescriptor grid;
  bool converged = true;
  std::string note;
};

}  // namespace grandnorm

#endif  // GRANDNORM_PGRID_HPP
