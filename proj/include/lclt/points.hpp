// Copyright 2026 The lcltlab Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace lclt {

enum class DensityKind { UniformUnitCube, UniformBall, ProductBeta, CustomGrid };

/// A bounded, compactly supported density on R^d.
///
/// UniformUnitCube is the uniform law on [0,1]^d. UniformBall is uniform on
/// the closed ball of radius `radius` about the origin. ProductBeta has
/// independent Beta(alpha, beta) coordinates; both shape parameters must be
/// at least 1 so the density stays bounded. CustomGrid is piecewise constant
/// on a regular grid of `resolution`^d cells over [0,1]^d, with cell weights
/// proportional to `weights` (row-major, last axis fastest).
struct DensitySpec {
  DensityKind kind = DensityKind::UniformUnitCube;
  std::size_t dim = 2;
  double radius = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::size_t resolution = 0;
  std::vector<double> weights;
  std::size_t max_attempts_per_point = 100000;

  static DensitySpec unit_cube(std::size_t d) {
    DensitySpec s;
    s.kind = DensityKind::UniformUnitCube;
    s.dim = d;
    return s;
  }
  static DensitySpec ball(std::size_t d, double radius) {
    DensitySpec s;
    s.kind = DensityKind::UniformBall;
    s.dim = d;
    s.radius = radius;
    return s;
  }
  static DensitySpec product_beta(std::size_t d, double a, double b) {
    DensitySpec s;
    s.kind = DensityKind::ProductBeta;
    s.dim = d;
    s.alpha = a;
    s.beta = b;
    return s;
  }
  static DensitySpec custom_grid(std::size_t d, std::size_t resolution, std::vector<double> weights) {
    DensitySpec s;
    s.kind = DensityKind::CustomGrid;
    s.dim = d;
    s.resolution = resolution;
    s.weights = std::move(weights);
    return s;
  }

  void validate() const {
    if (dim < 1 || dim > 8) throw ParameterError("DensitySpec: dimension must be in [1, 8]");
    switch (kind) {
      case DensityKind::UniformUnitCube:
        break;
      case DensityKind::UniformBall:
        if (!(radius > 0.0)) throw ParameterError("DensitySpec: ball radius must be positive");
        break;
      case DensityKind::ProductBeta:
        if (!(alpha >= 1.0 && beta >= 1.0))
          throw ParameterError("DensitySpec: product-beta needs alpha, beta >= 1 for a bounded density");
        break;
      case DensityKind::CustomGrid: {
        if (resolution < 1) throw ParameterError("DensitySpec: custom-grid resolution must be >= 1");
        std::size_t cells = 1;
        for (std::size_t j = 0; j < dim; ++j) cells *= resolution;
        if (weights.size() != cells)
          throw ParameterError("DensitySpec: custom-grid needs resolution^d weights");
        double total = 0.0;
        for (double w : weights) {
          if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("DensitySpec: weights must be finite and >= 0");
          total += w;
        }
        if (!(total > 0.0)) throw ParameterError("DensitySpec: custom-grid weights sum to zero");
        break;
      }
    }
    if (max_attempts_per_point < 1) throw ParameterError("DensitySpec: attempt budget must be >= 1");
  }

  /// Axis-aligned bounding box of the support, as (lo, hi) per axis.
  std::pair<double, double> support_bounds() const {
    if (kind == DensityKind::UniformBall) return {-radius, radius};
    return {0.0, 1.0};
  }

  double support_volume() const {
    if (kind == DensityKind::UniformBall) return unit_ball_volume(dim) * std::pow(radius, static_cast<double>(dim));
    return 1.0;
  }

  std::size_t grid_cell(std::span<const double> x) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      auto c = static_cast<std::size_t>(x[j] * static_cast<double>(resolution));
      idx = idx * resolution + std::min(c, resolution - 1);
    }
    return idx;
  }

  /// Normalised mass of each grid cell (custom-grid only).
  std::vector<double> grid_masses() const {
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> m(weights.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = weights[i] / total;
    return m;
  }

  static double unit_ball_volume(std::size_t d) {
    const double h = 0.5 * static_cast<double>(d);
    return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
  }
};

/// n points in R^d stored contiguously (point i occupies coords[i*d, i*d+d)).
struct PointSample {
  std::size_t dim = 0;
  std::vector<double> coords;

  PointSample() = default;
  PointSample(std::size_t d, std::vector<double> c) : dim(d), coords(std::move(c)) {
    if (d == 0 || coords.size() % d != 0) throw ParameterError("PointSample: coordinate count not a multiple of d");
  }

  std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }

  PointSample scaled(double c) const {
    PointSample out = *this;
    for (double& x : out.coords) x *= c;
    return out;
  }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

namespace detail {

template <class Engine>
double sample_beta_by_rejection(double a, double b, Engine& rng, std::size_t budget, std::size_t& attempts) {
  // Mode of Beta(a, b) with a, b >= 1 gives the density maximum.
  double mode = (a + b > 2.0) ? (a - 1.0) / (a + b - 2.0) : 0.5;
  auto log_kernel = [&](double x) {
    double v = 0.0;
    if (a != 1.0) v += (a - 1.0) * std::log(x);
    if (b != 1.0) v += (b - 1.0) * std::log1p(-x);
    return v;
  };
  const double log_max = log_kernel(mode);
  while (attempts < budget) {
    ++attempts;
    const double x = uniform01(rng);
    if (x <= 0.0 || x >= 1.0) {
      if (a == 1.0 && b == 1.0) return x;
      continue;
    }
    if (std::log(uniform01(rng)) <= log_kernel(x) - log_max) return x;
  }
  throw SamplingFailure("product-beta rejection sampling exceeded its attempt budget");
}

}  // namespace detail

/// n i.i.d. draws from `density`. Rejection-based kinds raise SamplingFailure
/// if one point needs more than `density.max_attempts_per_point` proposals.
template <class Engine>
PointSample sample_points(std::size_t n, const DensitySpec& density, Engine& rng) {
  density.validate();
  const std::size_t d = density.dim;
  std::vector<double> c(n * d);
  switch (density.kind) {
    case DensityKind::UniformUnitCube:
      for (double& x : c) x = uniform01(rng);
      break;
    case DensityKind::UniformBall: {
      const double r2 = density.radius * density.radius;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t attempts = 0;
        for (;;) {
          if (attempts++ >= density.max_attempts_per_point)
            throw SamplingFailure("uniform-ball rejection sampling exceeded its attempt budget");
          double s = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            c[i * d + j] = uniform(rng, -density.radius, density.radius);
            s += c[i * d + j] * c[i * d + j];
          }
          if (s <= r2) break;
        }
      }
      break;
    }
    case DensityKind::ProductBeta:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          std::size_t attempts = 0;
          c[i * d + j] = detail::sample_beta_by_rejection(density.alpha, density.beta, rng,
                                                          density.max_attempts_per_point, attempts);
        }
      }
      break;
    case DensityKind::CustomGrid: {
      const double wmax = *std::max_element(density.weights.begin(), density.weights.end());
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t attempts = 0;
        for (;;) {
          if (attempts++ >= density.max_attempts_per_point)
            throw SamplingFailure("custom-grid rejection sampling exceeded its attempt budget");
          for (std::size_t j = 0; j < d; ++j) c[i * d + j] = uniform01(rng);
          const double w = density.weights[density.grid_cell({c.data() + i * d, d})];
          if (uniform01(rng) * wmax < w) break;
        }
      }
      break;
    }
  }
  return PointSample(d, std::move(c));
}

/// Uniform grid of cubic cells over the bounding box of a point set, with
/// points bucketed by cell (CSR layout). The cell width never drops below the
/// requested width; it grows when needed to keep the cell count within
/// a small multiple of the point count.
class CellIndex {
 public:
  CellIndex(const PointSample& pts, double min_width) : dim_(pts.dim) {
    if (!(min_width > 0.0) || !std::isfinite(min_width)) throw ParameterError("CellIndex: cell width must be positive");
    const std::size_t n = pts.size();
    lo_.assign(dim_, 0.0);
    std::vector<double> hi(dim_, 0.0);
    if (n > 0) {
      for (std::size_t j = 0; j < dim_; ++j) {
        lo_[j] = std::numeric_limits<double>::infinity();
        hi[j] = -std::numeric_limits<double>::infinity();
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
          lo_[j] = std::min(lo_[j], pts.coords[i * dim_ + j]);
          hi[j] = std::max(hi[j], pts.coords[i * dim_ + j]);
        }
    }
    width_ = min_width;
    const double cap = static_cast<double>(std::max<std::size_t>(64, 4 * n));
    for (;;) {
      double cells = 1.0;
      for (std::size_t j = 0; j < dim_; ++j) cells *= std::floor((hi[j] - lo_[j]) / width_) + 1.0;
      if (cells <= cap) break;
      width_ *= 1.5;
    }
    counts_.resize(dim_);
    std::size_t total = 1;
    for (std::size_t j = 0; j < dim_; ++j) {
      counts_[j] = static_cast<std::int64_t>(std::floor((hi[j] - lo_[j]) / width_)) + 1;
      total *= static_cast<std::size_t>(counts_[j]);
    }
    start_.assign(total + 1, 0);
    std::vector<std::size_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < dim_; ++j) {
        auto k = static_cast<std::int64_t>(std::floor((pts.coords[i * dim_ + j] - lo_[j]) / width_));
        idx = idx * static_cast<std::size_t>(counts_[j]) + static_cast<std::size_t>(std::clamp<std::int64_t>(k, 0, counts_[j] - 1));
      }
      cell_of[i] = idx;
      ++start_[idx + 1];
    }
    for (std::size_t c = 0; c < total; ++c) start_[c + 1] += start_[c];
    items_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
    sorted_.resize(n * dim_);
    for (std::size_t p = 0; p < n; ++p)
      std::copy_n(pts.coords.begin() + static_cast<std::ptrdiff_t>(items_[p] * dim_), dim_, sorted_.begin() + static_cast<std::ptrdiff_t>(p * dim_));
    build_half_stencil();
  }

  double width() const noexcept { return width_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
  const std::vector<double>& sorted_coords() const noexcept { return sorted_; }
  std::uint32_t item(std::size_t slot) const { return items_[slot]; }

  std::vector<std::int64_t> cell_coords(std::span<const double> x) const {
    std::vector<std::int64_t> c(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto k = static_cast<std::int64_t>(std::floor((x[j] - lo_[j]) / width_));
      c[j] = std::clamp<std::int64_t>(k, 0, counts_[j] - 1);
    }
    return c;
  }

  std::size_t linear(const std::vector<std::int64_t>& c) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < dim_; ++j) idx = idx * static_cast<std::size_t>(counts_[j]) + static_cast<std::size_t>(c[j]);
    return idx;
  }

  std::span<const std::uint32_t> bucket(std::size_t cell) const {
    return {items_.data() + start_[cell], start_[cell + 1] - start_[cell]};
  }

  /// Calls fn(point_index) for every indexed point whose cell lies within
  /// Chebyshev cell distance `reach` of `centre` (clipped to the grid).
  template <class Fn>
  void for_each_within(const std::vector<std::int64_t>& centre, std::int64_t reach, Fn&& fn) const {
    std::vector<std::int64_t> c(dim_);
    visit(centre, reach, 0, c, [&](const std::vector<std::int64_t>& cell) {
      for (auto i : bucket(linear(cell))) fn(i);
    }, /*shell_only=*/false);
  }

  /// Calls fn(i, j) once for every unordered pair of distinct points whose
  /// cells are at Chebyshev cell distance <= 1. Cells adjacent along the last
  /// axis are contiguous in the bucket array, so each neighbouring row of up
  /// to three cells is scanned as one range.
  template <class Fn>
  void for_each_near_pair(Fn&& fn) const {
    for_each_near_slot_pair([&](std::size_t p, std::size_t q) { fn(items_[p], items_[q]); });
  }

  /// As for_each_near_pair, but passes positions in bucket order; the
  /// coordinates of position p start at sorted_coords()[p * dim()].
  template <class Fn>
  void for_each_near_slot_pair(Fn&& fn) const {
    const std::size_t total = start_.size() - 1;
    const std::size_t rows = row_delta_.size();
    const std::size_t lead = dim_ - 1;
    const std::int64_t last_count = counts_[lead];
    std::vector<std::int64_t> c(dim_, 0);
    for (std::size_t cell = 0; cell < total; ++cell) {
      const std::size_t begin = start_[cell], end = start_[cell + 1];
      if (begin != end) {
        const std::int64_t last = c[lead];
        // Own cell (later items only) and the next cell along the last axis.
        const std::size_t own_end = start_[cell + (last + 1 < last_count ? 2 : 1)];
        for (std::size_t p = begin; p < end; ++p)
          for (std::size_t q = p + 1; q < own_end; ++q) fn(p, q);
        const std::int64_t down = last > 0 ? 1 : 0;
        const std::int64_t up = last + 1 < last_count ? 1 : 0;
        for (std::size_t s = 0; s < rows; ++s) {
          const std::int64_t* off = row_stencil_.data() + s * lead;
          bool inside = true;
          for (std::size_t j = 0; j < lead && inside; ++j) {
            const std::int64_t k = c[j] + off[j];
            inside = k >= 0 && k < counts_[j];
          }
          if (!inside) continue;
          const auto base = static_cast<std::int64_t>(cell) + row_delta_[s];
          const std::size_t lo = start_[static_cast<std::size_t>(base - down)];
          const std::size_t hi = start_[static_cast<std::size_t>(base + up + 1)];
          for (std::size_t p = begin; p < end; ++p)
            for (std::size_t q = lo; q < hi; ++q) fn(p, q);
        }
      }
      for (std::size_t j = dim_; j-- > 0;) {
        if (++c[j] < counts_[j]) break;
        c[j] = 0;
      }
    }
  }

  /// Like for_each_within but only visits cells at Chebyshev distance
  /// exactly `ring` from `centre`.
  template <class Fn>
  void for_each_on_ring(const std::vector<std::int64_t>& centre, std::int64_t ring, Fn&& fn) const {
    std::vector<std::int64_t> c(dim_);
    visit(centre, ring, 0, c, [&](const std::vector<std::int64_t>& cell) {
      for (auto i : bucket(linear(cell))) fn(i);
    }, /*shell_only=*/true);
  }

  // Largest Chebyshev ring that still intersects the grid from `centre`.
  std::int64_t max_ring(const std::vector<std::int64_t>& centre) const {
    std::int64_t r = 0;
    for (std::size_t j = 0; j < dim_; ++j) r = std::max({r, centre[j], counts_[j] - 1 - centre[j]});
    return r;
  }

  /// Lower bound on the distance from x to any point in a cell at Chebyshev
  /// ring distance >= ring + 1 from x's own cell.
  double ring_clearance(std::span<const double> x, const std::vector<std::int64_t>& centre, std::int64_t ring) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dim_; ++j) {
      const double cell_lo = lo_[j] + static_cast<double>(centre[j] - ring) * width_;
      const double cell_hi = lo_[j] + static_cast<double>(centre[j] + ring + 1) * width_;
      best = std::min({best, x[j] - cell_lo, cell_hi - x[j]});
    }
    return std::max(best, 0.0);
  }

 private:
  // Offsets in {-1,0,1}^(d-1) on the leading axes whose first nonzero entry
  // is +1, with the linear offset of the matching cell (last axis unchanged).
  // Together with the +1 step along the last axis they reach each
  // neighbouring cell pair from exactly one side.
  void build_half_stencil() {
    const std::size_t lead = dim_ - 1;
    if (lead == 0) return;
    std::vector<std::int64_t> off(lead, -1);
    for (;;) {
      std::size_t first = 0;
      while (first < lead && off[first] == 0) ++first;
      if (first < lead && off[first] == 1) {
        std::int64_t delta = 0;
        for (std::size_t j = 0; j < lead; ++j) delta = delta * counts_[j] + off[j];
        row_stencil_.insert(row_stencil_.end(), off.begin(), off.end());
        row_delta_.push_back(delta * counts_[lead]);
      }
      std::size_t j = lead;
      while (j-- > 0) {
        if (++off[j] <= 1) break;
        off[j] = -1;
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
  }

  template <class Visit>
  void visit(const std::vector<std::int64_t>& centre, std::int64_t reach, std::size_t axis,
             std::vector<std::int64_t>& cur, Visit&& v, bool shell_only, bool on_shell = false) const {
    if (axis == dim_) {
      if (!shell_only || on_shell) v(cur);
      return;
    }
    const std::int64_t from = std::max<std::int64_t>(0, centre[axis] - reach);
    const std::int64_t to = std::min<std::int64_t>(counts_[axis] - 1, centre[axis] + reach);
    for (std::int64_t k = from; k <= to; ++k) {
      cur[axis] = k;
      const bool edge = (k == centre[axis] - reach) || (k == centre[axis] + reach);
      visit(centre, reach, axis + 1, cur, v, shell_only, on_shell || edge);
    }
  }

  std::size_t dim_;
  double width_ = 1.0;
  std::vector<double> lo_;
  std::vector<std::int64_t> counts_;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> items_;
  std::vector<double> sorted_;  // coordinates in bucket order
  std::vector<std::int64_t> row_stencil_;  // leading-axis offsets, dim_ - 1 entries each
  std::vector<std::int64_t> row_delta_;    // matching linear cell offsets
};

}  // namespace lclt
