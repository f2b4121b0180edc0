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

#include <gtest/gtest.h>

#include <random>

#include "lclt/lclt.hpp"
#include "oracles.hpp"

using namespace lclt;

namespace {

PointSample points(std::size_t d, std::vector<double> coords) { return PointSample{d, std::move(coords)}; }

PointSample uniform_sample(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto rng = make_stream({seed, 0, 0});
  return sample_points(n, DensitySpec::unit_cube(d), rng);
}

std::vector<std::vector<std::uint32_t>> graph_adjacency(const GeoGraph& g) {
  std::vector<std::vector<std::uint32_t>> a(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) a[i].assign(g.neighbors(i).begin(), g.neighbors(i).end());
  return a;
}

}  // namespace

TEST(SamplePoints, EmptySample) {
  auto rng = make_stream({1, 0, 0});
  EXPECT_EQ(sample_points(0, DensitySpec::unit_cube(2), rng).size(), 0u);
}

TEST(SamplePoints, UniformAxisMeans) {
  const auto s = uniform_sample(10000, 2, 4);
  for (std::size_t j = 0; j < 2; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) m += s.point(i)[j];
    m /= 1e4;
    EXPECT_NEAR(m, 0.5, 4 * std::sqrt(1.0 / 12 / 1e4));
  }
}

TEST(SamplePoints, SupportRespected) {
  auto rng = make_stream({8, 0, 0});
  const auto ball = sample_points(2000, DensitySpec::ball(3, 0.7), rng);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const std::vector<double> zero(3, 0.0);
    EXPECT_LE(squared_distance(ball.point(i), zero), 0.49);
  }
  const auto beta = sample_points(2000, DensitySpec::product_beta(2, 2.0, 3.0), rng);
  for (double x : beta.coords) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(SamplePoints, CustomGridChiSquare) {
  std::vector<double> w(16);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + static_cast<double>(i % 5);
  const auto dens = DensitySpec::custom_grid(2, 4, w);
  auto rng = make_stream({21, 0, 0});
  const std::size_t n = 10000;
  const auto s = sample_points(n, dens, rng);
  std::vector<double> hits(16, 0.0);
  for (std::size_t i = 0; i < n; ++i) hits[dens.grid_cell(s.point(i))] += 1.0;
  const auto mass = dens.grid_masses();
  double chi2 = 0.0;
  for (std::size_t c = 0; c < 16; ++c) {
    const double e = mass[c] * static_cast<double>(n);
    chi2 += (hits[c] - e) * (hits[c] - e) / e;
  }
  EXPECT_LT(chi2, 37.69729821835383);  // chi-square(15) quantile at 1 - 1e-3
}

TEST(SamplePoints, RejectionBudgetExhausted) {
  std::vector<double> w(4, 0.0);
  w[0] = 1e-300;
  w[1] = 1.0;
  auto dens = DensitySpec::custom_grid(2, 2, w);
  dens.max_attempts_per_point = 1;
  auto rng = make_stream({2, 0, 0});
  EXPECT_THROW(sample_points(1000, dens, rng), SamplingFailure);
}

TEST(SamplePoints, InvalidDensity) {
  auto rng = make_stream({2, 0, 0});
  EXPECT_THROW(sample_points(5, DensitySpec::product_beta(2, 0.5, 1.0), rng), ParameterError);
  EXPECT_THROW(sample_points(5, DensitySpec::custom_grid(2, 2, {1.0, 1.0}), rng), ParameterError);
}

TEST(BuildGraph, HandExamples) {
  const auto one = build_graph(points(2, {0.0, 0.0, 0.5, 0.0}), 1.0);
  EXPECT_EQ(one.edge_count(), 1u);
  const auto none = build_graph(points(2, {0.0, 0.0, 3.0, 0.0, 0.0, 3.0}), 1.0);
  EXPECT_EQ(none.edge_count(), 0u);
  // Distance exactly r is an edge.
  EXPECT_EQ(build_graph(points(1, {0.0, 0.25}), 0.25).edge_count(), 1u);
  EXPECT_THROW(build_graph(points(1, {0.0}), 0.0), ParameterError);
}

TEST(BuildGraph, MatchesAllPairs) {
  std::mt19937_64 gen(1);
  for (std::size_t d : {1u, 2u, 3u}) {
    for (std::size_t n : {0u, 1u, 2u, 50u, 200u, 500u}) {
      const auto s = uniform_sample(n, d, gen());
      for (double r : {0.02, 0.1, 0.3}) {
        const auto g = build_graph(s, r);
        ASSERT_EQ(graph_adjacency(g), oracle::all_pairs_adjacency(s, r)) << "d=" << d << " n=" << n << " r=" << r;
        ASSERT_EQ(count_close_pairs(s, r), g.edge_count());
      }
    }
  }
}

TEST(BuildGraph, SymmetricWithoutLoops) {
  const auto g = build_graph(uniform_sample(300, 2, 3), 0.08);
  for (std::uint32_t i = 0; i < g.order(); ++i)
    for (auto j : g.neighbors(i)) {
      EXPECT_NE(i, j);
      EXPECT_TRUE(g.adjacent(j, i));
    }
}

TEST(Motif, CanonicalFormsIdentifyIsomorphicGraphs) {
  const MotifSpec p1{3, {{0, 1}, {1, 2}}};
  const MotifSpec p2{3, {{0, 2}, {2, 1}}};
  EXPECT_EQ(p1.canonical(), p2.canonical());
  EXPECT_NE(p1.canonical(), MotifSpec::triangle().canonical());
  EXPECT_EQ(MotifSpec::star(3).canonical(), (MotifSpec{4, {{3, 0}, {3, 1}, {3, 2}}}).canonical());
  EXPECT_NE(MotifSpec::star(3).canonical(), MotifSpec::path(4).canonical());
}

TEST(Motif, Validation) {
  EXPECT_THROW((MotifSpec{3, {{0, 1}}}).validate(), ParameterError);  // disconnected
  EXPECT_THROW((MotifSpec{2, {{0, 0}}}).validate(), ParameterError);
  EXPECT_THROW(MotifSpec::path(6).mask(), CapabilityError);
}

TEST(InducedSubgraphs, EdgeMotifIsEdgeCount) {
  const auto g = build_graph(uniform_sample(300, 2, 5), 0.07);
  EXPECT_EQ(count_induced_subgraphs(g, MotifSpec::edge()), g.edge_count());
}

TEST(InducedSubgraphs, IsolatedTriangle) {
  const auto g = build_graph(points(2, {0.0, 0.0, 0.5, 0.0, 0.25, 0.4, 5.0, 5.0, 9.0, 1.0}), 1.0);
  EXPECT_EQ(count_induced_subgraphs(g, MotifSpec::triangle()), 1u);
}

TEST(InducedSubgraphs, RejectsLargeOrTrivialMotifs) {
  const auto g = build_graph(uniform_sample(20, 2, 5), 0.2);
  EXPECT_THROW(count_induced_subgraphs(g, MotifSpec::path(6)), CapabilityError);
  EXPECT_THROW(count_induced_subgraphs(g, MotifSpec::vertex()), ParameterError);
}

TEST(InducedSubgraphs, PathsMatchBruteForce) {
  const auto g = build_graph(uniform_sample(100, 2, 6), 0.12);
  EXPECT_EQ(count_induced_subgraphs(g, MotifSpec::path(3)), oracle::brute_force_induced(g, MotifSpec::path(3)));
}

TEST(InducedSubgraphs, TrianglesMatchAdjacencyIntersection) {
  const auto g = build_graph(uniform_sample(400, 2, 7), 0.08);
  std::uint64_t tri = 0;
  for (std::uint32_t i = 0; i < g.order(); ++i)
    for (auto j : g.neighbors(i))
      if (j > i)
        for (auto k : g.neighbors(j))
          if (k > j && g.adjacent(i, k)) ++tri;
  EXPECT_EQ(count_induced_subgraphs(g, MotifSpec::triangle()), tri);
}

TEST(InducedSubgraphs, FourVertexMotifsMatchBruteForce) {
  const auto g = build_graph(uniform_sample(60, 2, 8), 0.18);
  for (const auto& m : {MotifSpec::path(4), MotifSpec::star(3), MotifSpec::cycle(4), MotifSpec::complete(4)})
    EXPECT_EQ(count_induced_subgraphs(g, m), oracle::brute_force_induced(g, m));
}

TEST(InducedSubgraphs, ScaleInvariant) {
  const auto s = uniform_sample(150, 2, 9);
  const auto a = build_graph(s, 0.1);
  const auto b = build_graph(s.scaled(3.7), 0.37);
  for (const auto& m : {MotifSpec::edge(), MotifSpec::path(3), MotifSpec::triangle()})
    EXPECT_EQ(count_induced_subgraphs(a, m), count_induced_subgraphs(b, m));
  EXPECT_EQ(count_components(a), count_components(b));
  // Independence needs subcritical components, hence a smaller radius.
  EXPECT_EQ(independence_number(build_graph(s, 0.05), 64), independence_number(build_graph(s.scaled(3.7), 0.185), 64));
}

TEST(Components, HandExamples) {
  const auto far = build_graph(points(2, {0.0, 0.0, 5.0, 0.0, 0.0, 5.0}), 1.0);
  EXPECT_EQ(count_components_isomorphic(far, MotifSpec::vertex()), 3u);
  EXPECT_EQ(count_components(far), 3u);
  const auto pair = build_graph(points(2, {0.0, 0.0, 0.5, 0.0, 5.0, 5.0, 9.0, 9.0}), 1.0);
  EXPECT_EQ(count_components_isomorphic(pair, MotifSpec::edge()), 1u);
  const auto clump = build_graph(points(2, {0.0, 0.0, 0.1, 0.0, 0.2, 0.1, 0.0, 0.2}), 1.0);
  EXPECT_EQ(count_components(clump), 1u);
}

TEST(Components, MatchBruteForceClassification) {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 20; ++t) {
    const auto g = build_graph(uniform_sample(100, 2, gen()), 0.09);
    EXPECT_EQ(count_components(g), oracle::bfs_components(g).size());
    for (const auto& m : {MotifSpec::vertex(), MotifSpec::edge(), MotifSpec::path(3), MotifSpec::triangle()})
      EXPECT_EQ(count_components_isomorphic(g, m), oracle::brute_force_components_isomorphic(g, m));
  }
}

TEST(Components, MotifsOfOrderPartitionComponents) {
  const auto g = build_graph(uniform_sample(400, 2, 23), 0.05);
  std::map<std::size_t, std::uint64_t> by_order;
  for (const auto& c : oracle::bfs_components(g)) ++by_order[c.size()];
  EXPECT_EQ(count_components_isomorphic(g, MotifSpec::path(3)) + count_components_isomorphic(g, MotifSpec::triangle()),
            by_order[3]);
  std::uint64_t four = 0;
  for (const auto& m : {MotifSpec::path(4), MotifSpec::star(3), MotifSpec::cycle(4), MotifSpec::complete(4),
                        MotifSpec{4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}}, MotifSpec{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}}})
    four += count_components_isomorphic(g, m);
  EXPECT_EQ(four, by_order[4]);
}

TEST(Independence, HandExamples) {
  const auto far = build_graph(points(1, {0.0, 4.0, 8.0, 12.0}), 1.0);
  EXPECT_EQ(independence_number(far, 10), 4u);
  const auto tri = build_graph(points(2, {0.0, 0.0, 0.5, 0.0, 0.25, 0.4}), 1.0);
  EXPECT_EQ(independence_number(tri, 10), 1u);
}

TEST(Independence, MatchesSubsetEnumeration) {
  std::mt19937_64 gen(31);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 40; ++t) {
    const auto g = build_graph(uniform_sample(80, 2, gen()), 0.1);
    const auto [label, sizes] = g.components();
    if (*std::max_element(sizes.begin(), sizes.end()) > 12) continue;
    ++checked;
    EXPECT_EQ(independence_number(g, 12), oracle::brute_force_independence(g));
  }
  EXPECT_GE(checked, 10);
}

TEST(Independence, SupercriticalComponentRejected) {
  const auto g = build_graph(points(1, {0.0, 0.1, 0.2, 0.3, 0.4}), 0.15);
  EXPECT_THROW(independence_number(g, 4), SupercriticalComponentError);
  EXPECT_EQ(independence_number(g, 5), 3u);
}

TEST(Schedule, TauThermodynamic) {
  EXPECT_NEAR(tau_n(1000, RadiusSchedule::thermodynamic(1.0), 2, 2), 31.622776601683793, 1e-9);
  const auto sch = RadiusSchedule::thermodynamic(2.5);
  EXPECT_NEAR(sch.radius(400, 2), std::sqrt(2.5 / 400), 1e-15);
  const double r = sch.radius(400, 2);
  EXPECT_NEAR(std::pow(tau_n(400, sch, 2, 2), 2), 400 * 400 * r * r, 1e-9);
}

TEST(Schedule, TauSparseGrows) {
  const auto sch = RadiusSchedule::sparse(1.0, 0.6);
  const double t1 = tau_n(10000, sch, 2, 1), t2 = tau_n(100000, sch, 2, 1);
  // tau^2 = n * n^(1 - 0.6) = n^1.4
  EXPECT_NEAR(t1 * t1, std::pow(1e4, 1.4), 1e-6 * std::pow(1e4, 1.4));
  EXPECT_GT(t1 * t1, 1.0);
  EXPECT_GT(t2, t1);
}

TEST(Schedule, StrongSchedule) {
  const auto sch = RadiusSchedule::strong();
  EXPECT_NEAR(std::pow(sch.radius(1000, 3), -3.0), 1000.0, 1e-9);
  EXPECT_THROW(RadiusSchedule::sparse(1.0, 0.4).validate(2), ParameterError);
}
