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
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <span>
#include <vector>

#include "errors.hpp"
#include "motif.hpp"
#include "points.hpp"
#include "union_find.hpp"

namespace lclt {

enum class RadiusRule { RhoThermodynamic, Sparse, Strong };

/// Connection radius as a function of the sample size n:
///   RhoThermodynamic: r_n = (rho / n)^(1/d), so n r_n^d = rho exactly;
///   Sparse:           r_n = beta * n^(-gamma), gamma > 1/d;
///   Strong:           r_n = n^(-1/d).
struct RadiusSchedule {
  RadiusRule rule = RadiusRule::RhoThermodynamic;
  double rho = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  static RadiusSchedule thermodynamic(double rho) { return {RadiusRule::RhoThermodynamic, rho, 1.0, 1.0}; }
  static RadiusSchedule sparse(double beta, double gamma) { return {RadiusRule::Sparse, 0.0, beta, gamma}; }
  static RadiusSchedule strong() { return {RadiusRule::Strong, 1.0, 1.0, 1.0}; }

  void validate(std::size_t d) const {
    if (d < 1) throw ParameterError("RadiusSchedule: dimension must be >= 1");
    switch (rule) {
      case RadiusRule::RhoThermodynamic:
        if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("RadiusSchedule: rho must be finite and positive");
        break;
      case RadiusRule::Sparse:
        if (!(beta > 0.0)) throw ParameterError("RadiusSchedule: beta must be positive");
        if (!(gamma > 1.0 / static_cast<double>(d)))
          throw ParameterError("RadiusSchedule: sparse schedule needs gamma > 1/d");
        break;
      case RadiusRule::Strong:
        break;
    }
  }

  double radius(std::size_t n, std::size_t d) const {
    const double nn = static_cast<double>(n);
    const double inv_d = 1.0 / static_cast<double>(d);
    switch (rule) {
      case RadiusRule::RhoThermodynamic:
        return std::pow(rho / nn, inv_d);
      case RadiusRule::Sparse:
        return beta * std::pow(nn, -gamma);
      case RadiusRule::Strong:
        return std::pow(nn, -inv_d);
    }
    return 0.0;
  }

  std::string name() const {
    switch (rule) {
      case RadiusRule::RhoThermodynamic:
        return "rho-thermodynamic";
      case RadiusRule::Sparse:
        return "sparse";
      case RadiusRule::Strong:
        return "strong";
    }
    return "";
  }
};

/// tau_n = sqrt(n (n r_n^d)^(kappa-1)), the natural scale of the
/// kappa-vertex subgraph counts.
inline double tau_n(std::size_t n, const RadiusSchedule& schedule, unsigned kappa, std::size_t d) {
  if (n < 1) throw ParameterError("tau_n: n must be >= 1");
  if (kappa < 2) throw ParameterError("tau_n: kappa must be >= 2");
  const double nn = static_cast<double>(n);
  const double mean_degree = nn * std::pow(schedule.radius(n, d), static_cast<double>(d));
  return std::sqrt(nn * std::pow(mean_degree, static_cast<double>(kappa - 1)));
}

/// Gilbert graph G(X, r): i ~ j iff |X_i - X_j| <= r. Immutable once built;
/// adjacency is stored in compressed rows with sorted neighbour lists.
class GeoGraph {
 public:
  GeoGraph(PointSample sample, double r, std::vector<std::uint32_t> offsets, std::vector<std::uint32_t> neighbours)
      : sample_(std::move(sample)), r_(r), offsets_(std::move(offsets)), nbrs_(std::move(neighbours)) {}

  const PointSample& sample() const noexcept { return sample_; }
  double radius() const noexcept { return r_; }
  std::size_t order() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {nbrs_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t edge_count() const noexcept { return nbrs_.size() / 2; }

  bool adjacent(std::uint32_t i, std::uint32_t j) const {
    const auto a = neighbors(i);
    return std::binary_search(a.begin(), a.end(), j);
  }

  /// Component label per vertex and component sizes (labels are dense,
  /// numbered in order of each component's smallest vertex).
  std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> components() const {
    DisjointSets sets(order());
    for (std::uint32_t i = 0; i < order(); ++i)
      for (auto j : neighbors(i))
        if (j > i) sets.unite(i, j);
    std::vector<std::uint32_t> label(order(), ~0u), root_label(order(), ~0u), sizes;
    for (std::uint32_t i = 0; i < order(); ++i) {
      const auto r = sets.find(i);
      if (root_label[r] == ~0u) {
        root_label[r] = static_cast<std::uint32_t>(sizes.size());
        sizes.push_back(0);
      }
      label[i] = root_label[r];
      ++sizes[label[i]];
    }
    return {std::move(label), std::move(sizes)};
  }

 private:
  PointSample sample_;
  double r_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> nbrs_;
};

/// Calls fn(i, j) for every pair i < j with |X_i - X_j| <= r.
template <class Fn>
void for_each_close_pair(const PointSample& sample, double r, Fn&& fn) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("radius must be positive and finite");
  if (sample.size() < 2) return;
  const CellIndex index(sample, r);
  const double r2 = r * r;
  index.for_each_near_pair([&](std::uint32_t i, std::uint32_t j) {
    if (squared_distance(sample.point(i), sample.point(j)) <= r2) {
      if (i < j)
        fn(i, j);
      else
        fn(j, i);
    }
  });
}

/// Number of pairs at distance <= r, without building the graph.
inline std::uint64_t count_close_pairs(const PointSample& sample, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("radius must be positive and finite");
  if (sample.size() < 2) return 0;
  const CellIndex index(sample, r);
  const double r2 = r * r;
  const std::size_t d = sample.dim;
  const double* x = index.sorted_coords().data();
  std::uint64_t count = 0;
  index.for_each_near_slot_pair([&](std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = x[p * d + j] - x[q * d + j];
      s += t * t;
    }
    count += s <= r2 ? 1u : 0u;
  });
  return count;
}

/// Builds G(X, r) from a cell list of width >= r; ties at distance exactly r
/// are edges.
inline GeoGraph build_graph(PointSample sample, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("build_graph: radius must be positive and finite");
  const std::size_t n = sample.size();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for_each_close_pair(sample, r, [&](std::uint32_t i, std::uint32_t j) { edges.emplace_back(i, j); });
  std::vector<std::uint32_t> offsets(n + 1, 0), nbrs(2 * edges.size());
  for (const auto& [i, j] : edges) {
    ++offsets[i + 1];
    ++offsets[j + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [i, j] : edges) {
    nbrs[fill[i]++] = j;
    nbrs[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i) std::sort(nbrs.begin() + offsets[i], nbrs.begin() + offsets[i + 1]);
  return GeoGraph(std::move(sample), r, std::move(offsets), std::move(nbrs));
}

/// Packed adjacency mask of the subgraph induced on `vertices` (<= 5).
inline std::uint32_t induced_mask(const GeoGraph& g, const std::uint32_t* vertices, unsigned k) {
  std::uint32_t m = 0;
  for (unsigned j = 1; j < k; ++j)
    for (unsigned i = 0; i < j; ++i)
      if (g.adjacent(vertices[i], vertices[j])) m |= 1u << pair_bit(i, j);
  return m;
}

namespace detail {

// Enumerates every connected vertex subset of size k exactly once, rooted at
// its smallest vertex (Wernicke's ESU scheme).
class ConnectedSubsetEnumerator {
 public:
  ConnectedSubsetEnumerator(const GeoGraph& g, unsigned k) : g_(g), k_(k), mark_(g.order(), 0) {}

  template <class Fn>
  void run(Fn&& fn) {
    for (std::uint32_t v = 0; v < g_.order(); ++v) {
      sub_.assign(1, v);
      std::vector<std::uint32_t> ext;
      for (auto u : g_.neighbors(v))
        if (u > v) ext.push_back(u);
      bump(v, +1);
      extend(ext, v, fn);
      bump(v, -1);
    }
  }

 private:
  // mark_[u] counts members of sub_ that are u or adjacent to u.
  void bump(std::uint32_t w, int delta) {
    mark_[w] += delta;
    for (auto u : g_.neighbors(w)) mark_[u] += delta;
  }

  template <class Fn>
  void extend(std::vector<std::uint32_t> ext, std::uint32_t root, Fn& fn) {
    if (sub_.size() == k_) {
      fn(sub_.data());
      return;
    }
    while (!ext.empty()) {
      const std::uint32_t w = ext.back();
      ext.pop_back();
      std::vector<std::uint32_t> next = ext;
      // Exclusive neighbours of w: not in, and not adjacent to, the current subset.
      for (auto u : g_.neighbors(w))
        if (u > root && mark_[u] == 0) next.push_back(u);
      sub_.push_back(w);
      bump(w, +1);
      extend(std::move(next), root, fn);
      bump(w, -1);
      sub_.pop_back();
    }
  }

  const GeoGraph& g_;
  unsigned k_;
  std::vector<int> mark_;
  std::vector<std::uint32_t> sub_;
};

}  // namespace detail

/// G_n: the number of kappa-subsets whose induced graph is isomorphic to the
/// motif. Only connected subsets can match a connected motif, so the search
/// walks connected subsets only.
inline std::uint64_t count_induced_subgraphs(const GeoGraph& g, const MotifSpec& motif) {
  motif.validate();
  if (motif.kappa < 2) throw ParameterError("count_induced_subgraphs: kappa must be >= 2");
  if (motif.kappa > kMaxMotifOrder)
    throw CapabilityError("count_induced_subgraphs: kappa > 5 is not supported");
  if (motif.kappa == 2) return g.edge_count();
  const std::uint16_t target = motif.canonical();
  std::uint64_t count = 0;
  detail::ConnectedSubsetEnumerator(g, motif.kappa).run([&](const std::uint32_t* vs) {
    if (canonical_form(motif.kappa, induced_mask(g, vs, motif.kappa)) == target) ++count;
  });
  return count;
}

/// G*_n: the number of connected components isomorphic to the motif
/// (kappa = 1 counts isolated vertices).
inline std::uint64_t count_components_isomorphic(const GeoGraph& g, const MotifSpec& motif) {
  motif.validate();
  if (motif.kappa > kMaxMotifOrder)
    throw CapabilityError("count_components_isomorphic: kappa > 5 is not supported");
  const std::uint16_t target = motif.canonical();
  const auto [label, sizes] = g.components();
  std::vector<std::vector<std::uint32_t>> members(sizes.size());
  for (std::uint32_t v = 0; v < g.order(); ++v)
    if (sizes[label[v]] == motif.kappa) members[label[v]].push_back(v);
  std::uint64_t count = 0;
  for (const auto& m : members) {
    if (m.size() != motif.kappa) continue;
    if (canonical_form(motif.kappa, induced_mask(g, m.data(), motif.kappa)) == target) ++count;
  }
  return count;
}

inline std::uint64_t count_components(const GeoGraph& g) { return g.components().second.size(); }

namespace detail {

inline unsigned max_independent_set(const std::vector<std::uint64_t>& nbr, std::uint64_t candidates,
                                    unsigned chosen, unsigned best) {
  if (candidates == 0) return std::max(best, chosen);
  if (chosen + static_cast<unsigned>(std::popcount(candidates)) <= best) return best;
  // A vertex of degree <= 1 inside the candidate set is always safe to take.
  int pick = -1, branch = -1, branch_deg = -1;
  for (std::uint64_t rest = candidates; rest != 0; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    const int deg = std::popcount(nbr[static_cast<std::size_t>(v)] & candidates);
    if (deg <= 1) {
      pick = v;
      break;
    }
    if (deg > branch_deg) {
      branch = v;
      branch_deg = deg;
    }
  }
  if (pick >= 0) {
    const std::uint64_t closed = nbr[static_cast<std::size_t>(pick)] | (std::uint64_t{1} << pick);
    return max_independent_set(nbr, candidates & ~closed, chosen + 1, best);
  }
  const std::uint64_t bit = std::uint64_t{1} << branch;
  best = max_independent_set(nbr, candidates & ~(nbr[static_cast<std::size_t>(branch)] | bit), chosen + 1, best);
  return max_independent_set(nbr, candidates & ~bit, chosen, best);
}

}  // namespace detail

/// Independence number, computed exactly per component and summed. Every
/// component must have at most `component_size_cap` (<= 64) vertices.
inline std::uint64_t independence_number(const GeoGraph& g, std::size_t component_size_cap) {
  if (component_size_cap < 1 || component_size_cap > 64)
    throw ParameterError("independence_number: component size cap must lie in [1, 64]");
  const auto [label, sizes] = g.components();
  std::vector<std::vector<std::uint32_t>> members(sizes.size());
  for (std::uint32_t v = 0; v < g.order(); ++v) members[label[v]].push_back(v);
  std::uint64_t total = 0;
  std::vector<std::uint32_t> local(g.order());
  for (const auto& m : members) {
    if (m.size() > component_size_cap)
      throw SupercriticalComponentError("component of order " + std::to_string(m.size()) +
                                        " exceeds the cap of " + std::to_string(component_size_cap));
    if (m.size() <= 2) {
      total += 1;
      continue;
    }
    for (std::uint32_t i = 0; i < m.size(); ++i) local[m[i]] = i;
    std::vector<std::uint64_t> nbr(m.size(), 0);
    for (std::uint32_t i = 0; i < m.size(); ++i)
      for (auto u : g.neighbors(m[i])) nbr[i] |= std::uint64_t{1} << local[u];
    const std::uint64_t all = m.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m.size()) - 1;
    total += detail::max_independent_set(nbr, all, 0, 0);
  }
  return total;
}

}  // namespace lclt
