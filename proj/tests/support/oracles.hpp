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

// Slow reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "lclt/lclt.hpp"

namespace oracle {

struct FloodResult {
  std::size_t clusters = 0;
  std::size_t largest = 0;
};

/// Breadth-first flood fill over open sites with face adjacency.
inline FloodResult flood_fill(const std::vector<std::uint8_t>& open, const std::vector<std::int64_t>& sides) {
  const std::size_t d = sides.size();
  std::size_t n = 1;
  for (auto s : sides) n *= static_cast<std::size_t>(s);
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t j = d - 1; j-- > 0;) stride[j] = stride[j + 1] * static_cast<std::size_t>(sides[j + 1]);
  std::vector<char> seen(n, 0);
  FloodResult out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!open[s] || seen[s]) continue;
    ++out.clusters;
    std::size_t size = 0;
    std::deque<std::size_t> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      ++size;
      for (std::size_t j = 0; j < d; ++j) {
        const auto c = static_cast<std::int64_t>((v / stride[j]) % static_cast<std::size_t>(sides[j]));
        for (int dir : {-1, 1}) {
          const std::int64_t k = c + dir;
          if (k < 0 || k >= sides[j]) continue;
          const std::size_t w = dir > 0 ? v + stride[j] : v - stride[j];
          if (open[w] && !seen[w]) {
            seen[w] = 1;
            q.push_back(w);
          }
        }
      }
    }
    out.largest = std::max(out.largest, size);
  }
  return out;
}

/// Exact laws of the cluster count and the largest cluster on a box, by
/// enumerating all 2^|B| masks.
inline std::pair<std::map<std::int64_t, double>, std::map<std::int64_t, double>> enumerate_percolation(
    const std::vector<std::int64_t>& sides, double p) {
  std::size_t n = 1;
  for (auto s : sides) n *= static_cast<std::size_t>(s);
  std::map<std::int64_t, double> count_law, largest_law;
  std::vector<std::uint8_t> open(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      open[i] = (m >> i) & 1u;
      w *= open[i] ? p : 1.0 - p;
    }
    const auto f = flood_fill(open, sides);
    count_law[static_cast<std::int64_t>(f.clusters)] += w;
    largest_law[static_cast<std::int64_t>(f.largest)] += w;
  }
  return {count_law, largest_law};
}

/// Boundary sites of a box: lattice points outside it at unit distance from
/// some site, enumerated over the box inflated by one.
inline std::size_t enumerate_boundary(const std::vector<std::int64_t>& sides) {
  const std::size_t d = sides.size();
  std::vector<std::int64_t> c(d, -1);
  std::size_t count = 0;
  for (;;) {
    std::size_t outside_axes = 0;
    bool adjacent = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (c[j] < 0 || c[j] >= sides[j]) {
        ++outside_axes;
        if (c[j] < -1 || c[j] > sides[j]) adjacent = false;
      }
    }
    if (adjacent && outside_axes == 1) ++count;
    std::size_t j = d;
    while (j-- > 0) {
      if (++c[j] <= sides[j]) break;
      c[j] = -1;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return count;
}

inline std::vector<std::vector<std::uint32_t>> all_pairs_adjacency(const lclt::PointSample& s, double r) {
  std::vector<std::vector<std::uint32_t>> adj(s.size());
  for (std::uint32_t i = 0; i < s.size(); ++i)
    for (std::uint32_t j = 0; j < s.size(); ++j)
      if (i != j && lclt::squared_distance(s.point(i), s.point(j)) <= r * r) adj[i].push_back(j);
  return adj;
}

inline std::vector<std::vector<char>> adjacency_matrix(const lclt::GeoGraph& g) {
  std::vector<std::vector<char>> a(g.order(), std::vector<char>(g.order(), 0));
  for (std::size_t i = 0; i < g.order(); ++i)
    for (auto j : g.neighbors(i)) a[i][j] = 1;
  return a;
}

/// Brute-force isomorphism: try every bijection of the k vertices.
inline bool isomorphic(const std::vector<std::vector<char>>& a, const std::vector<std::uint32_t>& vs,
                       const lclt::MotifSpec& motif) {
  const unsigned k = motif.kappa;
  if (vs.size() != k) return false;
  std::vector<std::vector<char>> m(k, std::vector<char>(k, 0));
  for (auto [x, y] : motif.edges) m[x][y] = m[y][x] = 1;
  std::vector<unsigned> perm(k);
  for (unsigned i = 0; i < k; ++i) perm[i] = i;
  do {
    bool ok = true;
    for (unsigned x = 0; x < k && ok; ++x)
      for (unsigned y = x + 1; y < k && ok; ++y) ok = a[vs[perm[x]]][vs[perm[y]]] == m[x][y];
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Counts k-subsets whose induced subgraph is isomorphic to the motif by
/// visiting every k-subset.
inline std::uint64_t brute_force_induced(const lclt::GeoGraph& g, const lclt::MotifSpec& motif) {
  const auto a = adjacency_matrix(g);
  const std::size_t n = g.order();
  const unsigned k = motif.kappa;
  std::uint64_t count = 0;
  std::vector<std::uint32_t> vs(k);
  std::vector<char> pick(n, 0);
  if (k > n) return 0;
  std::fill(pick.end() - k, pick.end(), 1);
  do {
    std::size_t t = 0;
    for (std::uint32_t i = 0; i < n; ++i)
      if (pick[i]) vs[t++] = i;
    if (isomorphic(a, vs, motif)) ++count;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return count;
}

inline std::vector<std::vector<std::uint32_t>> bfs_components(const lclt::GeoGraph& g) {
  std::vector<char> seen(g.order(), 0);
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::uint32_t s = 0; s < g.order(); ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> comp{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < comp.size(); ++h)
      for (auto u : g.neighbors(comp[h]))
        if (!seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::uint64_t brute_force_components_isomorphic(const lclt::GeoGraph& g, const lclt::MotifSpec& motif) {
  const auto a = adjacency_matrix(g);
  std::uint64_t count = 0;
  for (const auto& c : bfs_components(g))
    if (isomorphic(a, c, motif)) ++count;
  return count;
}

/// Largest independent set by checking all 2^k subsets of each component.
inline std::uint64_t brute_force_independence(const lclt::GeoGraph& g) {
  const auto a = adjacency_matrix(g);
  std::uint64_t total = 0;
  for (const auto& c : bfs_components(g)) {
    const std::size_t k = c.size();
    unsigned best = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
      bool ok = true;
      for (std::size_t x = 0; x < k && ok; ++x)
        for (std::size_t y = x + 1; y < k && ok; ++y)
          if (((m >> x) & 1u) && ((m >> y) & 1u) && a[c[x]][c[y]]) ok = false;
      if (ok) best = std::max(best, static_cast<unsigned>(std::popcount(m)));
    }
    total += best;
  }
  return total;
}

/// kappa-th nearest-neighbour distance of every point by sorting all distances.
inline std::vector<double> knn_by_sort(const lclt::PointSample& s, unsigned kappa) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) d.push_back(std::sqrt(lclt::squared_distance(s.point(i), s.point(j))));
    std::sort(d.begin(), d.end());
    out[i] = d[kappa - 1];
  }
  return out;
}

/// Area of the intersection of two disks of radii a, b at centre distance c.
inline double lens_area(double a, double b, double c) {
  if (c >= a + b) return 0.0;
  if (c <= std::abs(a - b)) return std::numbers::pi * std::min(a, b) * std::min(a, b);
  const double x = (c * c + a * a - b * b) / (2 * c * a);
  const double y = (c * c + b * b - a * a) / (2 * c * b);
  return a * a * std::acos(x) + b * b * std::acos(y) -
         0.5 * std::sqrt((-c + a + b) * (c + a - b) * (c - a + b) * (c + a + b));
}

/// P[Binomial(n, p) = k] from lgamma, independent of the engine's recurrence.
inline double binomial_pmf(std::uint64_t n, double p, std::uint64_t k) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  return std::exp(std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * std::log(p) +
                  (nn - kk) * std::log1p(-p));
}

inline double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t x) {
  double s = 0.0;
  for (std::uint64_t k = x; k <= n; ++k) s += binomial_pmf(n, p, k);
  return s;
}

inline double binomial_lower_tail(std::uint64_t n, double p, std::uint64_t x) {
  double s = 0.0;
  for (std::uint64_t k = 0; k <= x; ++k) s += binomial_pmf(n, p, k);
  return s;
}

}  // namespace oracle
