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
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"
#include "points.hpp"
#include "rng.hpp"

namespace lclt {

/// Points with one real mark each: grain radii for the germ-grain model,
/// arrival times for RSA. Marks may be empty for unmarked functionals.
struct MarkedPointSample {
  PointSample base;
  std::vector<double> marks;

  std::size_t size() const noexcept { return base.size(); }
  bool has_marks() const noexcept { return marks.size() == base.size(); }
};

enum class MarkLaw { None, Uniform, Constant };

/// Mark distribution, drawn independently of the locations. Uniform draws
/// from [lo, hi]; Constant always returns lo.
struct MarkSpec {
  MarkLaw law = MarkLaw::None;
  double lo = 0.0;
  double hi = 1.0;

  static MarkSpec uniform(double lo, double hi) { return {MarkLaw::Uniform, lo, hi}; }
  static MarkSpec constant(double v) { return {MarkLaw::Constant, v, v}; }

  double upper_bound() const { return law == MarkLaw::Uniform ? hi : lo; }
};

/// Locations first, then marks, so a sample with marks shares its locations
/// with the unmarked sample drawn from the same stream.
template <class Engine>
MarkedPointSample sample_marked_points(std::size_t n, const DensitySpec& density, const MarkSpec& marks,
                                       Engine& rng) {
  MarkedPointSample out{sample_points(n, density, rng), {}};
  if (marks.law == MarkLaw::None) return out;
  if (marks.law == MarkLaw::Uniform && !(marks.hi >= marks.lo))
    throw ParameterError("MarkSpec: uniform marks need lo <= hi");
  out.marks.resize(n);
  for (double& m : out.marks) m = marks.law == MarkLaw::Uniform ? uniform(rng, marks.lo, marks.hi) : marks.lo;
  return out;
}

// ---------------------------------------------------------------------------
// Germ-grain volume

enum class IntegratorKind { Grid, MonteCarlo, ExactArcs };

/// How |union of balls| is measured.
///   Grid:       voxels of side h; value counts voxels whose centre is
///               covered, with rigorous lower/upper bounds from fully
///               covered and touched voxels.
///   MonteCarlo: `samples` uniform probes over the bounding box, unbiased,
///               with binomial standard error.
///   ExactArcs:  d = 2 only; boundary-arc integration (Green's theorem),
///               exact up to floating-point round-off.
struct Integrator {
  IntegratorKind kind = IntegratorKind::Grid;
  double h = 0.0;              // grid spacing
  bool auto_spacing = true;    // grid: h = (smallest positive radius) / 8
  std::size_t samples = 0;     // monte-carlo
  std::uint64_t seed = 0;      // monte-carlo probe stream
  std::size_t max_voxels = 200'000'000;

  static Integrator grid(double h) { return {IntegratorKind::Grid, h, false, 0, 0}; }
  static Integrator grid_auto() { return {IntegratorKind::Grid, 0.0, true, 0, 0}; }
  static Integrator monte_carlo(std::size_t m, std::uint64_t seed) {
    return {IntegratorKind::MonteCarlo, 0.0, false, m, seed};
  }
  static Integrator exact_arcs() { return {IntegratorKind::ExactArcs, 0.0, false, 0, 0}; }
};

struct VolumeEstimate {
  double value = 0.0;
  double lower = 0.0;       // rigorous for grid/exact; value - 4 SE for monte-carlo
  double upper = 0.0;
  double std_error = 0.0;   // monte-carlo only
  double error_bound = 0.0; // max(value - lower, upper - value)
};

namespace detail {

struct Balls {
  std::size_t dim = 0;
  std::vector<double> centre;  // scaled by 1/r_n
  std::vector<double> radius;
  double max_radius = 0.0;
  double min_positive_radius = std::numeric_limits<double>::infinity();
  std::vector<double> lo, hi;  // bounding box of the union
};

inline Balls scaled_balls(const MarkedPointSample& s, double r_n) {
  if (!(r_n > 0.0) || !std::isfinite(r_n)) throw ParameterError("germ_grain_volume: r_n must be positive");
  if (!s.has_marks()) throw ParameterError("germ_grain_volume: radius marks are required");
  Balls b;
  b.dim = s.base.dim;
  b.centre.resize(s.base.coords.size());
  for (std::size_t i = 0; i < b.centre.size(); ++i) b.centre[i] = s.base.coords[i] / r_n;
  b.radius = s.marks;
  b.lo.assign(b.dim, std::numeric_limits<double>::infinity());
  b.hi.assign(b.dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < b.radius.size(); ++i) {
    const double t = b.radius[i];
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("germ_grain_volume: radii must be finite and >= 0");
    b.max_radius = std::max(b.max_radius, t);
    if (t > 0.0) b.min_positive_radius = std::min(b.min_positive_radius, t);
    for (std::size_t j = 0; j < b.dim; ++j) {
      b.lo[j] = std::min(b.lo[j], b.centre[i * b.dim + j] - t);
      b.hi[j] = std::max(b.hi[j], b.centre[i * b.dim + j] + t);
    }
  }
  return b;
}

inline VolumeEstimate grid_volume(const Balls& b, double h, std::size_t max_voxels) {
  const std::size_t d = b.dim;
  std::vector<std::int64_t> n_vox(d);
  double total = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    n_vox[j] = static_cast<std::int64_t>(std::ceil((b.hi[j] - b.lo[j]) / h)) + 1;
    total *= static_cast<double>(n_vox[j]);
  }
  if (total > static_cast<double>(max_voxels))
    throw SizeError("germ_grain_volume: grid would need " + std::to_string(total) + " voxels");
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t j = d; j-- > 1;) stride[j - 1] = stride[j] * static_cast<std::size_t>(n_vox[j]);

  // bit 0: centre covered, bit 1: voxel inside one ball, bit 2: voxel touches a ball
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(total), 0);
  std::vector<std::int64_t> from(d), to(d), cur(d);
  for (std::size_t i = 0; i < b.radius.size(); ++i) {
    const double t = b.radius[i];
    if (t <= 0.0) continue;
    const double* c = &b.centre[i * d];
    for (std::size_t j = 0; j < d; ++j) {
      from[j] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((c[j] - t - b.lo[j]) / h)));
      to[j] = std::min<std::int64_t>(n_vox[j] - 1, static_cast<std::int64_t>(std::floor((c[j] + t - b.lo[j]) / h)));
      cur[j] = from[j];
    }
    const double t2 = t * t;
    for (;;) {
      double dc = 0.0, dmin = 0.0, dmax = 0.0;
      std::size_t idx = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const double a = b.lo[j] + static_cast<double>(cur[j]) * h;
        const double e = a + h;
        const double mid = a + 0.5 * h;
        dc += (mid - c[j]) * (mid - c[j]);
        const double near = std::clamp(c[j], a, e) - c[j];
        dmin += near * near;
        const double far = std::max(std::abs(a - c[j]), std::abs(e - c[j]));
        dmax += far * far;
        idx += static_cast<std::size_t>(cur[j]) * stride[j];
      }
      std::uint8_t f = 0;
      if (dc <= t2) f |= 1;
      if (dmax <= t2) f |= 2;
      if (dmin <= t2) f |= 4;
      flags[idx] |= f;
      std::size_t j = d;
      while (j-- > 0) {
        if (++cur[j] <= to[j]) break;
        cur[j] = from[j];
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
  }
  std::size_t centre = 0, inside = 0, touch = 0;
  for (auto f : flags) {
    centre += f & 1;
    inside += (f >> 1) & 1;
    touch += (f >> 2) & 1;
  }
  const double cell = std::pow(h, static_cast<double>(d));
  VolumeEstimate v;
  v.value = static_cast<double>(centre) * cell;
  v.lower = static_cast<double>(inside) * cell;
  v.upper = static_cast<double>(touch) * cell;
  v.error_bound = std::max(v.value - v.lower, v.upper - v.value);
  return v;
}

inline bool covered(const Balls& b, const CellIndex& index, const PointSample& centres, std::span<const double> y) {
  bool hit = false;
  index.for_each_within(index.cell_coords(y), 1, [&](std::uint32_t i) {
    if (!hit && squared_distance(y, centres.point(i)) <= b.radius[i] * b.radius[i]) hit = true;
  });
  return hit;
}

inline VolumeEstimate monte_carlo_volume(const Balls& b, std::size_t m, std::uint64_t seed) {
  const std::size_t d = b.dim;
  const PointSample centres(d, b.centre);
  const CellIndex index(centres, std::max(b.max_radius, 1e-12));
  Xoshiro256 rng(seed);
  double box = 1.0;
  for (std::size_t j = 0; j < d; ++j) box *= b.hi[j] - b.lo[j];
  std::vector<double> y(d);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < d; ++j) y[j] = uniform(rng, b.lo[j], b.hi[j]);
    hits += covered(b, index, centres, y) ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(m);
  VolumeEstimate v;
  v.value = box * p;
  v.std_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(m));
  v.lower = v.value - 4.0 * v.std_error;
  v.upper = v.value + 4.0 * v.std_error;
  v.error_bound = 4.0 * v.std_error;
  return v;
}

// Area of a union of disks: sum over every uncovered boundary arc of
// (x dy - y dx) / 2.
inline VolumeEstimate exact_arcs_area(const Balls& b) {
  if (b.dim != 2) throw ParameterError("germ_grain_volume: exact-arcs integrator requires d = 2");
  const std::size_t n = b.radius.size();
  const PointSample centres(2, b.centre);
  const CellIndex index(centres, std::max(2.0 * b.max_radius, 1e-12));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double area = 0.0, scale = 0.0;
  std::vector<std::pair<double, double>> cover;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double ri = b.radius[i];
    if (ri <= 0.0) continue;
    scale += std::numbers::pi * ri * ri;
    const double xi = b.centre[2 * i], yi = b.centre[2 * i + 1];
    cover.clear();
    bool swallowed = false;
    index.for_each_within(index.cell_coords(centres.point(i)), 1, [&](std::uint32_t j) {
      if (swallowed || j == i) return;
      const double rj = b.radius[j];
      if (rj <= 0.0) return;
      const double dx = b.centre[2 * j] - xi, dy = b.centre[2 * j + 1] - yi;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist >= ri + rj) return;
      if (dist + ri <= rj) {
        // Disk i lies inside disk j; identical disks keep the lower index.
        if (dist + ri < rj || ri < rj || j < i) swallowed = true;
        return;
      }
      if (dist + rj <= ri) return;
      const double mid = std::atan2(dy, dx);
      const double half = std::acos(std::clamp((ri * ri + dist * dist - rj * rj) / (2.0 * ri * dist), -1.0, 1.0));
      double a = mid - half, e = mid + half;
      // Normalise into [0, 2pi), splitting wrapped intervals.
      a = std::fmod(a + 2.0 * two_pi, two_pi);
      e = a + 2.0 * half;
      if (e > two_pi) {
        cover.emplace_back(a, two_pi);
        cover.emplace_back(0.0, e - two_pi);
      } else {
        cover.emplace_back(a, e);
      }
    });
    if (swallowed) continue;
    std::sort(cover.begin(), cover.end());
    auto arc = [&](double a, double e) {
      if (e <= a) return;
      area += 0.5 * (ri * ri * (e - a) + ri * xi * (std::sin(e) - std::sin(a)) - ri * yi * (std::cos(e) - std::cos(a)));
    };
    double pos = 0.0;
    for (const auto& [a, e] : cover) {
      if (a > pos) arc(pos, a);
      pos = std::max(pos, e);
    }
    arc(pos, two_pi);
  }
  VolumeEstimate v;
  v.value = area;
  v.error_bound = 1e-12 * std::max(scale, 1.0) + 64.0 * std::numeric_limits<double>::epsilon() * scale;
  v.lower = area - v.error_bound;
  v.upper = area + v.error_bound;
  return v;
}

}  // namespace detail

/// Lebesgue volume of the union of balls B(X_i / r_n; T_i).
inline VolumeEstimate germ_grain_volume(const MarkedPointSample& sample, double r_n, const Integrator& integrator) {
  const auto balls = detail::scaled_balls(sample, r_n);
  if (integrator.kind == IntegratorKind::Grid && !integrator.auto_spacing && !(integrator.h > 0.0))
    throw ParameterError("germ_grain_volume: grid spacing must be positive");
  if (integrator.kind == IntegratorKind::MonteCarlo && integrator.samples == 0)
    throw ParameterError("germ_grain_volume: monte-carlo sample count must be positive");
  if (balls.max_radius <= 0.0) return {};
  switch (integrator.kind) {
    case IntegratorKind::Grid: {
      const double h = integrator.auto_spacing ? balls.min_positive_radius / 8.0 : integrator.h;
      return detail::grid_volume(balls, h, integrator.max_voxels);
    }
    case IntegratorKind::MonteCarlo:
      return detail::monte_carlo_volume(balls, integrator.samples, integrator.seed);
    case IntegratorKind::ExactArcs:
      return detail::exact_arcs_area(balls);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Random sequential adsorption

/// Number of particles accepted when points arrive in increasing mark order
/// (ties broken by index) and a point is rejected iff some already accepted
/// point lies within distance r_n. Returns the accepted indices if `accepted`
/// is non-null.
inline std::uint64_t rsa_accepted_count(const MarkedPointSample& sample, double r_n,
                                        std::vector<std::uint32_t>* accepted = nullptr) {
  if (!(r_n > 0.0) || !std::isfinite(r_n)) throw ParameterError("rsa_accepted_count: r_n must be positive");
  if (!sample.has_marks()) throw ParameterError("rsa_accepted_count: arrival-time marks are required");
  const std::size_t n = sample.size();
  if (accepted) accepted->clear();
  if (n == 0) return 0;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return sample.marks[a] != sample.marks[b] ? sample.marks[a] < sample.marks[b] : a < b;
  });

  // Grid sized for all points; buckets hold accepted points only.
  const CellIndex layout(sample.base, r_n);
  std::vector<std::vector<std::uint32_t>> buckets;
  {
    std::size_t cells = 1;
    for (auto c : layout.counts()) cells *= static_cast<std::size_t>(c);
    buckets.resize(cells);
  }
  const double r2 = r_n * r_n;
  std::uint64_t count = 0;
  std::vector<std::int64_t> lo(layout.dim()), hi(layout.dim()), cur(layout.dim());
  for (auto i : order) {
    const auto xi = sample.base.point(i);
    const auto home = layout.cell_coords(xi);
    bool blocked = false;
    for (std::size_t j = 0; j < home.size(); ++j) {
      lo[j] = std::max<std::int64_t>(0, home[j] - 1);
      hi[j] = std::min<std::int64_t>(layout.counts()[j] - 1, home[j] + 1);
      cur[j] = lo[j];
    }
    for (;;) {
      for (auto k : buckets[layout.linear(cur)])
        if (squared_distance(xi, sample.base.point(k)) <= r2) {
          blocked = true;
          break;
        }
      if (blocked) break;
      std::size_t j = cur.size();
      while (j-- > 0) {
        if (++cur[j] <= hi[j]) break;
        cur[j] = lo[j];
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
    if (blocked) continue;
    buckets[layout.linear(home)].push_back(i);
    if (accepted) accepted->push_back(i);
    ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// k-nearest-neighbour sums

/// Distance from every point to its kappa-th nearest other point, by
/// expanding Chebyshev rings over a cell index.
inline std::vector<double> knn_distances(const PointSample& pts, unsigned kappa) {
  const std::size_t n = pts.size();
  if (kappa < 1) throw ParameterError("knn: kappa must be >= 1");
  if (n <= kappa)
    throw InfiniteDistanceError("knn: " + std::to_string(n) + " points have no " + std::to_string(kappa) +
                                "-th nearest neighbour");
  const std::size_t d = pts.dim;
  double vol = 1.0, extent = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, pts.coords[i * d + j]);
      hi = std::max(hi, pts.coords[i * d + j]);
    }
    vol *= hi - lo;
    extent = std::max(extent, hi - lo);
  }
  double width = vol > 0.0 ? std::pow(vol * (kappa + 1.0) / static_cast<double>(n), 1.0 / static_cast<double>(d))
                           : extent / static_cast<double>(n);
  if (!(width > 0.0)) width = 1.0;
  const CellIndex index(pts, width);

  std::vector<double> out(n);
  std::priority_queue<double> best;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto xi = pts.point(i);
    const auto home = index.cell_coords(xi);
    best = {};
    const std::int64_t last = index.max_ring(home);
    for (std::int64_t ring = 0; ring <= last; ++ring) {
      index.for_each_on_ring(home, ring, [&](std::uint32_t j) {
        if (j == i) return;
        const double s = squared_distance(xi, pts.point(j));
        if (best.size() < kappa) {
          best.push(s);
        } else if (s < best.top()) {
          best.pop();
          best.push(s);
        }
      });
      if (best.size() == kappa) {
        const double clear = index.ring_clearance(xi, home, ring);
        if (best.top() <= clear * clear) break;
      }
    }
    out[i] = std::sqrt(best.top());
  }
  return out;
}

/// r_n^(-alpha) * sum over points of (kappa-th nearest neighbour distance)^alpha.
inline double knn_sum(const PointSample& pts, unsigned kappa, double alpha, double r_n) {
  if (!(alpha > 0.0)) throw ParameterError("knn_sum: alpha must be positive");
  if (!(r_n > 0.0) || !std::isfinite(r_n)) throw ParameterError("knn_sum: r_n must be positive");
  const auto dist = knn_distances(pts, kappa);
  double s = 0.0;
  for (double x : dist) s += std::pow(x / r_n, alpha);
  return s;
}

inline double knn_sum(const MarkedPointSample& sample, unsigned kappa, double alpha, double r_n) {
  return knn_sum(sample.base, kappa, alpha, r_n);
}

}  // namespace lclt
