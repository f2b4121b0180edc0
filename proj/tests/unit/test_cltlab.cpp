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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lclt/lclt.hpp"
#include "oracles.hpp"

using namespace lclt;

namespace {

EmpiricalDistribution from_ints(std::initializer_list<double> xs) {
  auto d = EmpiricalDistribution::integer_lattice();
  for (double x : xs) d.accumulate(x);
  return d;
}

EmpiricalDistribution binomial(std::uint64_t n, double p) {
  std::map<std::int64_t, double> w;
  for (std::uint64_t k = 0; k <= n; ++k) w[static_cast<std::int64_t>(k)] = oracle::binomial_pmf(n, p, k);
  return EmpiricalDistribution::exact(w);
}

}  // namespace

TEST(Distribution, AccumulateAndMoments) {
  const auto d = from_ints({1, 2, 2, 3, 7});
  EXPECT_EQ(d.n_samples(), 5.0);
  EXPECT_DOUBLE_EQ(d.mean(), 3.0);
  EXPECT_DOUBLE_EQ(d.variance(), (4 + 1 + 1 + 0 + 16) / 4.0);
  EXPECT_DOUBLE_EQ(d.probability(2), 0.4);
  EXPECT_EQ(d.probability(5), 0.0);
  EXPECT_FALSE(d.degenerate());
  EXPECT_TRUE(from_ints({4, 4, 4}).degenerate());
}

TEST(Distribution, RejectsNonIntegralAndNonFinite) {
  auto d = EmpiricalDistribution::integer_lattice();
  EXPECT_THROW(d.accumulate(0.5), KindMismatchError);
  EXPECT_THROW(d.accumulate(std::nan("")), ParameterError);
  EXPECT_THROW(EmpiricalDistribution::real_binned(0.0), ParameterError);
  auto e = binomial(3, 0.5);
  EXPECT_THROW(e.accumulate(1), KindMismatchError);
}

TEST(Distribution, MergeEqualsSequentialAccumulation) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd(2.0, 3.0);
  auto whole = EmpiricalDistribution::real_binned(0.25);
  auto a = EmpiricalDistribution::real_binned(0.25), b = a;
  for (int i = 0; i < 1000; ++i) {
    const double x = nd(gen);
    whole.accumulate(x);
    (i < 400 ? a : b).accumulate(x);
  }
  a.merge(b);
  EXPECT_TRUE(a.same_table(whole));
  EXPECT_NEAR(a.mean(), whole.mean(), 1e-12);
  EXPECT_NEAR(a.variance(), whole.variance(), 1e-10);
  EXPECT_THROW(a.merge(EmpiricalDistribution::real_binned(0.5)), KindMismatchError);
  EXPECT_THROW(a.merge(EmpiricalDistribution::integer_lattice()), KindMismatchError);
}

TEST(Distribution, ExactBinomialMoments) {
  for (auto [n, p] : {std::pair{10ull, 0.5}, {100ull, 0.3}, {1000ull, 0.7}}) {
    const auto d = exact_binomial_pmf(n, p);
    EXPECT_NEAR(d.n_samples(), 1.0, 1e-12);
    EXPECT_NEAR(d.mean(), n * p, 1e-9 * n);
    EXPECT_NEAR(d.variance(), n * p * (1 - p), 1e-9 * n);
    for (std::uint64_t k = 0; k <= n; k += n / 10)
      EXPECT_NEAR(d.probability(static_cast<std::int64_t>(k)), oracle::binomial_pmf(n, p, k), 1e-13);
  }
}

TEST(Span, GcdRule) {
  EXPECT_TRUE(std::isinf(estimate_span(from_ints({7, 7, 7})).h));
  EXPECT_FALSE(estimate_span(from_ints({7, 7})).lattice());
  EXPECT_EQ(estimate_span(from_ints({0, 2, 4, 8})).h, 2.0);
  EXPECT_EQ(estimate_span(from_ints({3, 9, 15, -3})).h, 6.0);
  EXPECT_EQ(estimate_span(from_ints({0, 1, 5})).h, 1.0);
  EXPECT_EQ(estimate_span(binomial(20, 0.4)).h, 1.0);
}

TEST(Span, UniformSampleIsNonLattice) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto d = EmpiricalDistribution::real_binned(0.01);
  for (int i = 0; i < 10000; ++i) d.accumulate(u(gen));
  EXPECT_EQ(estimate_span(d).h, 0.0);
  SpanOptions cm;
  cm.method = SpanMethod::CharacteristicModulus;
  EXPECT_EQ(estimate_span(d, cm).h, 0.0);
}

TEST(Span, CharacteristicModulusFindsLattice) {
  std::mt19937_64 gen(3);
  std::binomial_distribution<int> bd(40, 0.5);
  auto d = EmpiricalDistribution::integer_lattice();
  for (int i = 0; i < 20000; ++i) d.accumulate(3.0 * bd(gen));
  SpanOptions cm;
  cm.method = SpanMethod::CharacteristicModulus;
  EXPECT_EQ(estimate_span(d, cm).h, 3.0);
  EXPECT_EQ(estimate_span(d).h, 3.0);
}

TEST(Span, Divides) {
  EXPECT_TRUE(divides(2.0, 4.0));
  EXPECT_TRUE(divides(0.5, 1.5));
  EXPECT_FALSE(divides(2.0, 3.0));
  EXPECT_FALSE(divides(1.0, 0.5));
  // A non-lattice law has no divisibility constraint.
  EXPECT_TRUE(divides(0.0, 0.37));
}

TEST(Discrepancy, ClassicalBinomialValues) {
  struct Case {
    std::uint64_t n;
    double p, sup;
  };
  for (const Case& c : {Case{100, 0.5, 0.001992186931077833}, Case{1000, 0.5, 0.00019944617514844332},
                        Case{10000, 0.5, 1.9946864649678098e-05}, Case{100, 0.3, 0.017913345526307856},
                        Case{1000, 0.3, 0.00556974387423026}, Case{10000, 0.3, 0.0017516345151687984}}) {
    const auto r = local_clt_discrepancy(exact_binomial_pmf(c.n, c.p), std::sqrt(double(c.n)), 1.0);
    EXPECT_NEAR(r.sup_discrepancy, c.sup, 1e-9 * c.sup + 1e-15) << c.n << " " << c.p;
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.mc_error, 0.0);
    EXPECT_EQ(r.span.h, 1.0);
  }
}

TEST(Discrepancy, TwoAtomLaw) {
  // Z in {0, 2} with equal weight: mean 1, sd 1, span 2, so the sup is |1/2 - 2 phi(1)|.
  const auto z = EmpiricalDistribution::exact({{0, 0.5}, {2, 0.5}});
  const auto r = local_clt_discrepancy(z, 1.0, 2.0);
  EXPECT_NEAR(r.sup_discrepancy, 0.01605855096171327, 1e-15);
  EXPECT_THROW(local_clt_discrepancy(z, 1.0, 1.0), SpanDivisibilityError);
  EXPECT_THROW(local_clt_discrepancy(z, 0.0, 2.0), ParameterError);
}

TEST(Discrepancy, DegenerateAndEmpty) {
  EXPECT_THROW(local_clt_discrepancy(point_mass(3), 1.0, 1.0), DegenerateDistributionError);
  EXPECT_THROW(local_clt_discrepancy(EmpiricalDistribution::integer_lattice(), 1.0, 1.0),
               DegenerateDistributionError);
}

TEST(Discrepancy, TrueAndPluginParametersAgreeForExactLaws) {
  for (std::uint64_t n : {50ull, 400ull}) {
    const double p = 0.35, m = std::sqrt(double(n));
    const auto d = exact_binomial_pmf(n, p);
    DiscrepancyOptions truth;
    truth.mean = n * p;
    truth.sigma = std::sqrt(p * (1 - p));
    const auto a = local_clt_discrepancy(d, m, 1.0);
    const auto b = local_clt_discrepancy(d, m, 1.0, truth);
    EXPECT_NEAR(a.sup_discrepancy, b.sup_discrepancy, 1e-12);
    EXPECT_NEAR(a.sigma2_hat, p * (1 - p), 1e-12);
  }
}

TEST(Discrepancy, SampledBinomialWithinMonteCarloError) {
  std::mt19937_64 gen(4);
  std::binomial_distribution<int> bd(100, 0.3);
  auto d = EmpiricalDistribution::integer_lattice();
  for (int i = 0; i < 200000; ++i) d.accumulate(bd(gen));
  const auto r = local_clt_discrepancy(d, 10.0, 1.0);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.mc_error, 0.0);
  EXPECT_NEAR(r.sup_discrepancy, 0.017913345526307856, 4 * r.combined_error());
}

TEST(Distribution, MillionBinomialDrawsMean) {
  // Standard error of the mean is 5 / 1000.
  auto rng = make_stream({5, 0, 0});
  std::binomial_distribution<int> bd(100, 0.5);
  auto d = EmpiricalDistribution::integer_lattice();
  for (int i = 0; i < 1000000; ++i) d.accumulate(bd(rng));
  EXPECT_NEAR(d.mean(), 50.0, 4 * 5e-3);
  EXPECT_NEAR(d.variance(), 25.0, 0.25);
}

// Sampled sums of Bernoulli(0.3) along n = 10^2, 10^3, 10^4. The sup's noise
// floor grows like n^(1/4) / sqrt(N) while the exact sups are 1.79e-2,
// 5.57e-3 and 1.75e-3, so the final step needs about 10^8 draws per size.
TEST(Discrepancy, SampledBinomialSupsDecreaseBeyondError) {
  std::vector<LocalCltReport> series;
  for (std::uint32_t n : {100u, 1000u, 10000u}) {
    auto rng = make_stream({6, n, 0});
    std::binomial_distribution<int> bd(static_cast<int>(n), 0.3);
    std::vector<std::uint64_t> counts(n + 1, 0);
    for (std::uint64_t i = 0; i < 100000000; ++i) ++counts[static_cast<std::size_t>(bd(rng))];
    auto d = EmpiricalDistribution::integer_lattice();
    for (std::uint32_t k = 0; k <= n; ++k)
      for (std::uint64_t c = 0; c < counts[k]; ++c) d.accumulate(k);
    series.push_back(local_clt_discrepancy(d, std::sqrt(double(n)), 1.0));
  }
  const auto v = assess_decrease(series);
  EXPECT_TRUE(v.passed());
  EXPECT_TRUE(v.strictly_decreasing);
}

TEST(Discrepancy, ScaledCurveIsConsistent) {
  const auto r = local_clt_discrepancy(exact_binomial_pmf(30, 0.5), std::sqrt(30.0), 1.0);
  ASSERT_EQ(r.u_grid.size(), r.scaled_probability.size());
  double mass = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < r.u_grid.size(); ++i) {
    mass += r.probability[i];
    EXPECT_NEAR(r.scaled_probability[i], r.scale * r.probability[i], 1e-15);
    worst = std::max(worst, std::abs(r.scaled_probability[i] - r.gaussian[i]));
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(worst, r.sup_discrepancy);
}

TEST(Decrease, Assessment) {
  auto rep = [](double sup, double err) {
    LocalCltReport r;
    r.sup_discrepancy = sup;
    r.mc_error = err;
    return r;
  };
  std::vector<LocalCltReport> good{rep(0.1, 0.01), rep(0.05, 0.01), rep(0.02, 0.005)};
  EXPECT_TRUE(assess_decrease(good).passed());
  EXPECT_TRUE(assess_decrease(good).strictly_decreasing);
  std::vector<LocalCltReport> flat{rep(0.1, 0.01), rep(0.05, 0.01), rep(0.04, 0.01)};
  EXPECT_FALSE(assess_decrease(flat).final_step_decrease);
  std::vector<LocalCltReport> bump{rep(0.1, 0.001), rep(0.2, 0.001), rep(0.01, 0.001)};
  EXPECT_FALSE(assess_decrease(bump).no_large_increase);
  EXPECT_FALSE(assess_decrease(bump).passed());
}

TEST(Exact, ConvolutionIdentities) {
  const auto a = exact_binomial_pmf(7, 0.3), b = exact_binomial_pmf(5, 0.3);
  const auto c = convolve(a, b);
  EXPECT_LT(total_variation(c, exact_binomial_pmf(12, 0.3)), 1e-13);
  EXPECT_LT(total_variation(convolve(a, point_mass(0)), a), 1e-15);
  EXPECT_LT(total_variation(convolve(a, b), convolve(b, a)), 1e-15);
  EXPECT_NEAR(c.mean(), a.mean() + b.mean(), 1e-12);
  EXPECT_NEAR(c.variance(), a.variance() + b.variance(), 1e-12);
  EXPECT_LT(total_variation(convolve(a, point_mass(4)), shifted(a, 4)), 1e-15);
}

TEST(Exact, SpanOfConvolutionDividesSummandSpans) {
  const auto x = EmpiricalDistribution::exact({{0, 0.5}, {4, 0.5}});
  const auto y = EmpiricalDistribution::exact({{0, 0.3}, {6, 0.7}});
  const double hx = estimate_span(x).h, hy = estimate_span(y).h, hs = estimate_span(convolve(x, y)).h;
  EXPECT_EQ(hs, 2.0);
  EXPECT_TRUE(divides(hs, hx));
  EXPECT_TRUE(divides(hs, hy));
}

TEST(Exact, MixtureAndTotalVariation) {
  const auto a = point_mass(0), b = point_mass(1);
  const auto m = mixture(a, b, 0.25);
  EXPECT_DOUBLE_EQ(m.probability(1), 0.25);
  EXPECT_DOUBLE_EQ(total_variation(m, a), 0.25);
  EXPECT_DOUBLE_EQ(total_variation(a, b), 1.0);
}

TEST(Decomposition, ReducesToBinomial) {
  DecompositionSpec spec;
  spec.v_law = EmpiricalDistribution::exact({{0, 0.6}, {1, 0.4}});
  for (const auto& pt : decomposition_check(spec, {20, 200, 2000})) {
    const auto direct = local_clt_discrepancy(exact_binomial_pmf(pt.n, 0.4), std::sqrt(double(pt.n)), 1.0);
    EXPECT_NEAR(pt.report.sup_discrepancy, direct.sup_discrepancy, 1e-13);
    EXPECT_TRUE(pt.variance_bound_holds);
  }
}

TEST(Decomposition, HeavierYStillDecreases) {
  DecompositionSpec spec;
  spec.v_law = EmpiricalDistribution::exact({{0, 0.7}, {1, 0.3}});
  spec.y_law = [](std::uint64_t n) { return exact_binomial_pmf(n, 0.6); };
  spec.defect = [](std::uint64_t n) { return 1.0 / double(n); };
  const auto pts = decomposition_check(spec, {100, 1000, 10000});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LT(pts[i].report.sup_discrepancy, pts[i - 1].report.sup_discrepancy);
    EXPECT_LT(pts[i].y_kolmogorov, pts[i - 1].y_kolmogorov);
  }
  for (const auto& pt : pts) EXPECT_TRUE(pt.variance_bound_holds);
}

TEST(Decomposition, RejectsBadWidthAndDegenerateV) {
  DecompositionSpec spec;
  spec.v_law = EmpiricalDistribution::exact({{0, 0.5}, {1, 0.5}});
  spec.b = 0.5;
  EXPECT_THROW(decomposition_check(spec, {10}), SpanDivisibilityError);
  spec.b = 1.0;
  spec.v_law = point_mass(2);
  EXPECT_THROW(decomposition_check(spec, {10}), ConfigurationError);
  spec.v_law = EmpiricalDistribution::exact({{0, 0.5}, {1, 0.5}});
  spec.defect = [](std::uint64_t) { return 1.5; };
  EXPECT_THROW(decomposition_check(spec, {10}), ConfigurationError);
  spec.defect = [](std::uint64_t) { return 0.0; };
  EXPECT_THROW(decomposition_check(spec, {0}), ConfigurationError);
}

TEST(Bounds, Chernoff) {
  EXPECT_DOUBLE_EQ(chernoff_bound(5.0, 5.0, Tail::Upper), 1.0);
  EXPECT_DOUBLE_EQ(chernoff_bound(5.0, 5.0, Tail::Lower), 1.0);
  double prev = 1.0;
  for (double x = 31.0; x <= 100.0; x += 1.0) {
    const double b = chernoff_bound(30.0, x, Tail::Upper);
    EXPECT_LT(b, prev);
    prev = b;
  }
  const double bound = chernoff_bound(30.0, 50.0, Tail::Upper);
  EXPECT_NEAR(bound, 0.003921499439272673, 1e-15);
  EXPECT_NEAR(oracle::binomial_upper_tail(100, 0.3, 50), 2.2060913327165886e-05, 1e-15);
  EXPECT_GE(bound, oracle::binomial_upper_tail(100, 0.3, 50));
  EXPECT_THROW(chernoff_bound(30.0, 20.0, Tail::Upper), ParameterError);
  EXPECT_THROW(chernoff_bound(30.0, 40.0, Tail::Lower), ParameterError);
}

TEST(Bounds, ChernoffDominatesBinomialTails) {
  for (std::uint64_t n : {20ull, 100ull, 500ull}) {
    for (double p : {0.1, 0.5, 0.8}) {
      const double mu = n * p;
      for (std::uint64_t x = 1; x <= n; ++x) {
        if (double(x) >= mu) {
          EXPECT_GE(chernoff_bound(mu, x, Tail::Upper) * (1 + 1e-12), oracle::binomial_upper_tail(n, p, x));
        }
        if (double(x) <= mu) {
          EXPECT_GE(chernoff_bound(mu, x, Tail::Lower) * (1 + 1e-12), oracle::binomial_lower_tail(n, p, x));
        }
      }
    }
  }
}

TEST(Bounds, BoundedDifference) {
  EXPECT_NEAR(bounded_difference_bound(100.0, 1.0, 30.0), 0.022217993076484612, 1e-16);
  // Doubling K and t leaves the bound unchanged; doubling m alone raises it.
  EXPECT_DOUBLE_EQ(bounded_difference_bound(50.0, 2.0, 40.0), bounded_difference_bound(50.0, 1.0, 20.0));
  EXPECT_GT(bounded_difference_bound(100.0, 1.0, 20.0), bounded_difference_bound(50.0, 1.0, 20.0));
  EXPECT_THROW(bounded_difference_bound(0.0, 1.0, 1.0), ParameterError);
}
