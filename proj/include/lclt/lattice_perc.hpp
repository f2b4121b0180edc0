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
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "union_find.hpp"

namespace lclt {

using SiteCoord = std::vector<std::int64_t>;

/// Axis-aligned box of lattice sites [lo_j, hi_j] in Z^d, stored row-major
/// with the last axis varying fastest.
class LatticeBox {
 public:
  LatticeBox(SiteCoord lo, SiteCoord hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty() || lo_.size() != hi_.size())
      throw ParameterError("LatticeBox: lo and hi must be nonempty and of equal dimension");
    for (std::size_t j = 0; j < lo_.size(); ++j)
      if (lo_[j] > hi_[j]) throw ParameterError("LatticeBox: lo > hi on axis " + std::to_string(j));
  }

  /// Box [0, side_j - 1] on each axis.
  static LatticeBox from_sides(const std::vector<std::int64_t>& sides) {
    SiteCoord lo(sides.size(), 0), hi(sides.size());
    for (std::size_t j = 0; j < sides.size(); ++j) {
      if (sides[j] < 1) throw ParameterError("LatticeBox: side lengths must be >= 1");
      hi[j] = sides[j] - 1;
    }
    return LatticeBox(std::move(lo), std::move(hi));
  }

  static LatticeBox cube(std::size_t d, std::int64_t side) {
    return from_sides(std::vector<std::int64_t>(d, side));
  }

  std::size_t dimension() const noexcept { return lo_.size(); }
  const SiteCoord& lo() const noexcept { return lo_; }
  const SiteCoord& hi() const noexcept { return hi_; }
  std::int64_t side(std::size_t j) const { return hi_[j] - lo_[j] + 1; }

  std::vector<std::int64_t> sides() const {
    std::vector<std::int64_t> s(dimension());
    for (std::size_t j = 0; j < dimension(); ++j) s[j] = side(j);
    return s;
  }

  std::size_t site_count() const {
    std::size_t n = 1;
    for (std::size_t j = 0; j < dimension(); ++j) n *= static_cast<std::size_t>(side(j));
    return n;
  }

  double cube_like_ratio() const {
    const auto s = sides();
    const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    return static_cast<double>(*mn) / static_cast<double>(*mx);
  }

  bool contains(const SiteCoord& c) const {
    if (c.size() != dimension()) return false;
    for (std::size_t j = 0; j < dimension(); ++j)
      if (c[j] < lo_[j] || c[j] > hi_[j]) return false;
    return true;
  }

  std::size_t index_of(const SiteCoord& c) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < dimension(); ++j)
      idx = idx * static_cast<std::size_t>(side(j)) + static_cast<std::size_t>(c[j] - lo_[j]);
    return idx;
  }

  SiteCoord coord_of(std::size_t idx) const {
    SiteCoord c(dimension());
    for (std::size_t j = dimension(); j-- > 0;) {
      const auto s = static_cast<std::size_t>(side(j));
      c[j] = lo_[j] + static_cast<std::int64_t>(idx % s);
      idx /= s;
    }
    return c;
  }

  // Row-major stride of axis j.
  std::size_t stride(std::size_t j) const {
    std::size_t s = 1;
    for (std::size_t k = j + 1; k < dimension(); ++k) s *= static_cast<std::size_t>(side(k));
    return s;
  }

  friend bool operator==(const LatticeBox&, const LatticeBox&) = default;

 private:
  SiteCoord lo_;
  SiteCoord hi_;
};

/// Number of sites outside the box at unit distance from it. Only face
/// neighbours qualify, so each axis contributes the two opposite faces.
inline std::size_t boundary_count(const LatticeBox& box) {
  std::size_t total = 0;
  for (std::size_t j = 0; j < box.dimension(); ++j) {
    std::size_t face = 1;
    for (std::size_t k = 0; k < box.dimension(); ++k)
      if (k != j) face *= static_cast<std::size_t>(box.side(k));
    total += 2 * face;
  }
  return total;
}

struct SiteConfiguration {
  LatticeBox box;
  std::vector<std::uint8_t> open;  // one byte per site, row-major
  double p = 0.0;

  SiteConfiguration(LatticeBox b, std::vector<std::uint8_t> mask, double prob)
      : box(std::move(b)), open(std::move(mask)), p(prob) {
    if (open.size() != box.site_count())
      throw ParameterError("SiteConfiguration: mask length does not match box");
  }

  std::size_t open_count() const {
    return static_cast<std::size_t>(std::count(open.begin(), open.end(), std::uint8_t{1}));
  }
};

/// Opens each site independently with probability p, consuming 32 random
/// bits per site in row-major order.
template <class Engine>
SiteConfiguration sample_configuration(const LatticeBox& box, double p, Engine& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("sample_configuration: p must lie in [0,1]");
  const std::size_t n = box.site_count();
  std::vector<std::uint8_t> mask(n);
  const auto threshold = static_cast<std::uint64_t>(std::ldexp(p, 32));
  std::size_t i = 0;
  for (; i + 1 < n; i += 2) {
    const std::uint64_t w = rng();
    mask[i] = (w & 0xffffffffULL) < threshold;
    mask[i + 1] = (w >> 32) < threshold;
  }
  if (i < n) mask[i] = (rng() & 0xffffffffULL) < threshold;
  return SiteConfiguration(box, std::move(mask), p);
}

struct ClusterSummary {
  std::size_t clusters = 0;
  std::size_t largest = 0;
  std::size_t open_sites = 0;
};

/// Union-find labelling of open clusters under face adjacency, scanning
/// sites in index order and linking each open site to its already-scanned
/// open neighbours. Every successful link merges two clusters, so the cluster
/// count is the number of open sites minus the number of successful links.
inline ClusterSummary summarize_clusters(const SiteConfiguration& config, bool want_largest = true) {
  const LatticeBox& box = config.box;
  const std::size_t n = box.site_count();
  const std::size_t d = box.dimension();
  std::vector<std::size_t> strides(d), sides(d), coord(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    strides[j] = box.stride(j);
    sides[j] = static_cast<std::size_t>(box.side(j));
  }

  DisjointSets sets(n);
  ClusterSummary out;
  std::size_t links = 0;
  const std::uint8_t* open = config.open.data();
  for (std::size_t i = 0; i < n; ++i) {
    if (open[i]) {
      ++out.open_sites;
      const auto id = static_cast<DisjointSets::index_type>(i);
      for (std::size_t j = 0; j < d; ++j) {
        if (coord[j] == 0 || !open[i - strides[j]]) continue;
        if (sets.unite(id, static_cast<DisjointSets::index_type>(i - strides[j]))) ++links;
      }
    }
    // Odometer over coordinates, last axis fastest.
    for (std::size_t j = d; j-- > 0;) {
      if (++coord[j] < sides[j]) break;
      coord[j] = 0;
    }
  }
  out.clusters = out.open_sites - links;
  if (want_largest) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!open[i]) continue;
      const auto id = static_cast<DisjointSets::index_type>(i);
      if (sets.find(id) == id) out.largest = std::max<std::size_t>(out.largest, sets.set_size(id));
    }
  }
  return out;
}

inline std::size_t count_clusters(const SiteConfiguration& config) {
  return summarize_clusters(config, false).clusters;
}

inline std::size_t largest_cluster(const SiteConfiguration& config) {
  return summarize_clusters(config).largest;
}

}  // namespace lclt
