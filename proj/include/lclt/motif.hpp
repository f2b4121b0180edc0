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
#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace lclt {

inline constexpr std::size_t kMaxMotifOrder = 5;

/// Bit position of the pair (i, j), i != j, in a packed adjacency mask on
/// at most kMaxMotifOrder vertices.
constexpr unsigned pair_bit(unsigned i, unsigned j) {
  if (i > j) std::swap(i, j);
  // Pairs ordered (0,1),(0,2),(1,2),(0,3),(1,3),(2,3),... by larger endpoint.
  return j * (j - 1) / 2 + i;
}

constexpr unsigned pair_count(unsigned k) { return k * (k - 1) / 2; }

namespace detail {

inline std::vector<std::uint16_t> build_canonical_table(unsigned k) {
  const unsigned pairs = pair_count(k);
  std::vector<std::uint16_t> table(std::size_t{1} << pairs);
  std::array<unsigned, kMaxMotifOrder> perm{};
  std::vector<std::array<unsigned, kMaxMotifOrder>> perms;
  std::iota(perm.begin(), perm.begin() + k, 0u);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.begin() + k));

  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    std::uint32_t best = ~0u;
    for (const auto& p : perms) {
      std::uint32_t image = 0;
      for (unsigned j = 1; j < k; ++j)
        for (unsigned i = 0; i < j; ++i)
          if (mask & (1u << pair_bit(i, j))) image |= 1u << pair_bit(p[i], p[j]);
      best = std::min(best, image);
    }
    table[mask] = static_cast<std::uint16_t>(best);
  }
  return table;
}

}  // namespace detail

/// Canonical representative of a labelled graph on k <= 5 vertices: the
/// smallest packed mask over all relabellings. Two masks are isomorphic iff
/// their canonical forms agree. Tables are built once per order on first use.
inline std::uint16_t canonical_form(unsigned k, std::uint32_t mask) {
  if (k < 1 || k > kMaxMotifOrder)
    throw CapabilityError("isomorphism tables cover graphs on 1.." + std::to_string(kMaxMotifOrder) + " vertices");
  static const std::array<std::vector<std::uint16_t>, kMaxMotifOrder + 1> tables = [] {
    std::array<std::vector<std::uint16_t>, kMaxMotifOrder + 1> t;
    for (unsigned k2 = 1; k2 <= kMaxMotifOrder; ++k2) t[k2] = detail::build_canonical_table(k2);
    return t;
  }();
  return tables[k][mask];
}

/// A connected template graph Gamma on kappa labelled vertices.
struct MotifSpec {
  unsigned kappa = 1;
  std::vector<std::pair<unsigned, unsigned>> edges;

  MotifSpec() = default;
  MotifSpec(unsigned k, std::vector<std::pair<unsigned, unsigned>> e) : kappa(k), edges(std::move(e)) { validate(); }

  void validate() const {
    if (kappa < 1) throw ParameterError("MotifSpec: kappa must be >= 1");
    std::vector<unsigned> comp(kappa);
    std::iota(comp.begin(), comp.end(), 0u);
    auto root = [&](unsigned v) {
      while (comp[v] != v) v = comp[v];
      return v;
    };
    for (auto [a, b] : edges) {
      if (a >= kappa || b >= kappa) throw ParameterError("MotifSpec: edge endpoint out of range");
      if (a == b) throw ParameterError("MotifSpec: self-loops are not allowed");
      comp[root(a)] = root(b);
    }
    for (unsigned v = 1; v < kappa; ++v)
      if (root(v) != root(0)) throw ParameterError("MotifSpec: template graph must be connected");
  }

  std::uint32_t mask() const {
    if (kappa > kMaxMotifOrder)
      throw CapabilityError("motif order " + std::to_string(kappa) + " exceeds the supported maximum of 5");
    std::uint32_t m = 0;
    for (auto [a, b] : edges) m |= 1u << pair_bit(a, b);
    return m;
  }

  std::uint16_t canonical() const { return canonical_form(kappa, mask()); }

  static MotifSpec vertex() { return {1, {}}; }
  static MotifSpec edge() { return {2, {{0, 1}}}; }
  static MotifSpec path(unsigned k) {
    std::vector<std::pair<unsigned, unsigned>> e;
    for (unsigned i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1);
    return {k, std::move(e)};
  }
  static MotifSpec triangle() { return {3, {{0, 1}, {1, 2}, {0, 2}}}; }
  static MotifSpec star(unsigned leaves) {
    std::vector<std::pair<unsigned, unsigned>> e;
    for (unsigned i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return {leaves + 1, std::move(e)};
  }
  static MotifSpec cycle(unsigned k) {
    auto m = path(k);
    m.edges.emplace_back(k - 1, 0);
    m.validate();
    return m;
  }
  static MotifSpec complete(unsigned k) {
    std::vector<std::pair<unsigned, unsigned>> e;
    for (unsigned j = 1; j < k; ++j)
      for (unsigned i = 0; i < j; ++i) e.emplace_back(i, j);
    return {k, std::move(e)};
  }

  /// vertex, edge, triangle, path3..path5, star3, star4, cycle4, cycle5, k4, k5.
  static MotifSpec named(const std::string& name) {
    if (name == "vertex") return vertex();
    if (name == "edge") return edge();
    if (name == "triangle") return triangle();
    if (name.rfind("path", 0) == 0 && name.size() == 5) return path(static_cast<unsigned>(name[4] - '0'));
    if (name.rfind("star", 0) == 0 && name.size() == 5) return star(static_cast<unsigned>(name[4] - '0'));
    if (name.rfind("cycle", 0) == 0 && name.size() == 6) return cycle(static_cast<unsigned>(name[5] - '0'));
    if (name == "k4") return complete(4);
    if (name == "k5") return complete(5);
    throw ParameterError("unknown motif name '" + name + "'");
  }
};

}  // namespace lclt
