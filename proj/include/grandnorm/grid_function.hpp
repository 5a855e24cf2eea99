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
#ifndef GRANDNORM_GRID_FUNCTION_HPP
#define GRANDNORM_GRID_FUNCTION_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "grandnorm/error.hpp"
#include "grandnorm/step_function.hpp"

namespace grandnorm {

/// Samples on a uniform 1D or 2D grid. 2D storage is row-major with x
/// fastest: index = j * nx + i. Sample (i, j) sits at (x0 + i h, y0 + j h)
/// and represents a cell of measure h^dim.
class GridFunction {
 public:
  static GridFunction line(std::vector<double> samples, double h, double x0 = 0.0) {
    const std::size_t n = samples.size();
    return GridFunction(std::move(samples), 1, n, 1, h, x0, 0.0);
  }

  static GridFunction plane(std::vector<double> samples, std::size_t nx, std::size_t ny, double h,
                            double x0 = 0.0, double y0 = 0.0) {
    return GridFunction(std::move(samples), 2, nx, ny, h, x0, y0);
  }

  /// Samples g(x) at x_i = x0 + i h, i < n.
  template <class F>
  static GridFunction sample_line(std::size_t n, double h, double x0, F&& g) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = g(x0 + h * static_cast<double>(i));
    return line(std::move(s), h, x0);
  }

  template <class F>
  static GridFunction sample_plane(std::size_t nx, std::size_t ny, double h, double x0, double y0,
                                   F&& g) {
    std::vector<double> s(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        s[j * nx + i] = g(x0 + h * static_cast<double>(i), y0 + h * static_cast<double>(j));
      }
    }
    return plane(std::move(s), nx, ny, h, x0, y0);
  }

  int dim() const noexcept { return dim_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double h() const noexcept { return h_; }
  double x0() const noexcept { return x0_; }
  double y0() const noexcept { return y0_; }
  double x(std::size_t i) const noexcept { return x0_ + h_ * static_cast<double>(i); }
  double y(std::size_t j) const noexcept { return y0_ + h_ * static_cast<double>(j); }
  double cell_measure() const noexcept { return dim_ == 1 ? h_ : h_ * h_; }

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t k) const { return samples_[k]; }
  double at(std::size_t i, std::size_t j) const { return samples_[j * nx_ + i]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
  }

  bool same_geometry(const GridFunction& o) const noexcept {
    return dim_ == o.dim_ && nx_ == o.nx_ && ny_ == o.ny_ && h_ == o.h_ && x0_ == o.x0_ &&
           y0_ == o.y0_;
  }

  GridFunction with_samples(std::vector<double> samples) const {
    detail::require(samples.size() == samples_.size(), "GridFunction: sample count mismatch");
    return GridFunction(std::move(samples), dim_, nx_, ny_, h_, x0_, y0_);
  }

 private:
  GridFunction(std::vector<double> samples, int dim, std::size_t nx, std::size_t ny, double h,
               double x0, double y0)
      : samples_(std::move(samples)), dim_(dim), nx_(nx), ny_(ny), h_(h), x0_(x0), y0_(y0) {
    detail::require(std::isfinite(h) && h > 0.0, "GridFunction: spacing must be positive");
    detail::require(std::isfinite(x0) && std::isfinite(y0), "GridFunction: origin must be finite");
    detail::require(nx >= 4 && (dim == 1 || ny >= 4), "GridFunction: need >= 4 points per axis");
    detail::require(samples_.size() == nx * ny, "GridFunction: sample count does not match shape");
    for (double v : samples_) {
      detail::require(std::isfinite(v), "GridFunction: samples must be finite");
    }
  }

  std::vector<double> samples_;
  int dim_;
  std::size_t nx_;
  std::size_t ny_;
  double h_;
  double x0_;
  double y0_;
};

/// Strictly positive grid function.
class Weight {
 public:
  explicit Weight(GridFunction g) : grid_(std::move(g)) {
    for (double v : grid_.samples()) {
      detail::require(v > 0.0, "Weight: samples must be strictly positive");
    }
  }

  static Weight unit_like(const GridFunction& g) {
    return Weight(g.with_samples(std::vector<double>(g.size(), 1.0)));
  }

  const GridFunction& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return grid_.samples(); }
  double operator[](std::size_t k) const { return grid_[k]; }

 private:
  GridFunction grid_;
};

/// One atom per grid cell.
inline StepFunction to_step_function(const GridFunction& g) {
  std::vector<Atom> atoms;
  atoms.reserve(g.size());
  for (double v : g.samples()) atoms.push_back({v, g.cell_measure()});
  return StepFunction(std::move(atoms));
}

}  // namespace grandnorm

#endif  // GRANDNORM_GRID_FUNCTION_HPP
