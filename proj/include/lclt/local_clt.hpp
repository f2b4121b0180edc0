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
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "span.hpp"

namespace lclt {

inline double normal_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Local-CLT discrepancy of one law at one system size.
///
/// With m the scale, b the interval width and sigma = sd / m, the statistic is
///   sup_u | m P[Z in [u, u+b)] - (b / sigma) phi((u - mu) / (m sigma)) |
/// over a lattice- or bin-aligned grid of u.
struct LocalCltReport {
  double mu_hat = 0.0;
  double variance = 0.0;      // Var(Z), raw units
  double sigma2_hat = 0.0;    // Var(Z) / m^2
  double scale = 1.0;         // m
  double bin_width = 1.0;     // b
  double sup_discrepancy = 0.0;
  double argmax_u = 0.0;
  double mc_error = 0.0;      // m * binomial standard error at the argmax
  double plugin_error = 0.0;  // first-order effect of estimating mu and sigma
  double continuity_bound = 0.0;  // real-binned: sup over real u minus sup over grid u, at most this
  double kolmogorov_distance = 0.0;
  double n_samples = 0.0;
  bool exact = false;
  SpanEstimate span;
  std::vector<double> u_grid;
  std::vector<double> scaled_probability;  // m * P[Z in [u, u+b)]
  std::vector<double> gaussian;            // (b / sigma) phi(...)
  std::vector<double> probability;         // P[Z in [u, u+b)]

  double sigma_hat() const { return std::sqrt(sigma2_hat); }
  double combined_error() const { return mc_error + plugin_error; }
  bool operator==(const LocalCltReport&) const = default;
};

struct DiscrepancyOptions {
  // Evaluate with these instead of the plug-in estimates (sigma on the m scale).
  std::optional<double> mean;
  std::optional<double> sigma;
  double coverage_sds = 6.0;
  // Defaults to gcd for integer-lattice laws, characteristic modulus for real-binned.
  std::optional<SpanMethod> span_method;
  SpanOptions span;
};

/// sup_x |F(x) - Phi((x - mean) / sd)| with both one-sided limits of F at
/// each atom (integer-lattice) or each raw value (real-binned).
inline double kolmogorov_to_normal(const EmpiricalDistribution& dist, double mean, double sd) {
  if (!(sd > 0.0)) throw DegenerateDistributionError("kolmogorov_to_normal: sd must be positive");
  double worst = 0.0;
  if (dist.kind() == DistributionKind::RealBinned && !dist.values().empty()) {
    std::vector<double> v = dist.values();
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
      const double g = normal_cdf((v[i] - mean) / sd);
      const auto first = static_cast<double>(std::lower_bound(v.begin(), v.end(), v[i]) - v.begin());
      worst = std::max({worst, std::abs((static_cast<double>(i) + 1.0) / n - g), std::abs(first / n - g)});
    }
    return worst;
  }
  double cum = 0.0;
  for (const auto& [k, w] : dist.atoms()) {
    const double g = normal_cdf((dist.atom_value(k) - mean) / sd);
    const double before = cum;
    cum += w / dist.n_samples();
    worst = std::max({worst, std::abs(before - g), std::abs(cum - g)});
  }
  return worst;
}

/// Evaluates the local-CLT discrepancy of `dist` at scale m and width b.
///
/// Integer-lattice laws: the span is estimated (gcd), b must be a multiple of
/// it, and u runs over the lattice through the smallest atom in steps of the
/// span. Real-binned laws: b must equal the bin width and u runs over bin
/// edges k b. The grid covers mu +- coverage_sds * sd and every observed atom.
inline LocalCltReport local_clt_discrepancy(const EmpiricalDistribution& dist, double m, double b,
                                            const DiscrepancyOptions& opt = {}) {
  if (!(m > 0.0) || !(b > 0.0)) throw ParameterError("local_clt_discrepancy: m and b must be positive");
  if (dist.n_samples() <= 0.0) throw DegenerateDistributionError("local_clt_discrepancy: empty distribution");
  LocalCltReport rep;
  rep.scale = m;
  rep.bin_width = b;
  rep.exact = dist.is_exact();
  rep.n_samples = dist.n_samples();
  rep.mu_hat = dist.mean();
  rep.variance = dist.variance();
  rep.sigma2_hat = rep.variance / (m * m);
  if (!(rep.variance > 0.0)) throw DegenerateDistributionError("local_clt_discrepancy: zero sample variance");

  const double mu = opt.mean.value_or(rep.mu_hat);
  const double sigma = opt.sigma.value_or(rep.sigma_hat());
  const double sd = m * sigma;

  SpanOptions span_opt = opt.span;
  span_opt.method = opt.span_method.value_or(
      dist.kind() == DistributionKind::RealBinned ? SpanMethod::CharacteristicModulus : SpanMethod::Gcd);
  rep.span = estimate_span(dist, span_opt);

  double step = b;
  double anchor = 0.0;
  if (dist.kind() == DistributionKind::IntegerLattice) {
    if (!divides(rep.span.h, b))
      throw SpanDivisibilityError("local_clt_discrepancy: b = " + std::to_string(b) +
                                  " is not a multiple of the span " + std::to_string(rep.span.h));
    step = rep.span.lattice() ? rep.span.h : b;
    anchor = static_cast<double>(dist.atoms().begin()->first);
  } else if (std::abs(b - dist.bin_width()) > 1e-12 * b) {
    throw ParameterError("local_clt_discrepancy: b must equal the bin width of a real-binned distribution");
  }

  const double lo_val = std::min(mu - opt.coverage_sds * sd, dist.atom_value(dist.atoms().begin()->first));
  const double hi_val = std::max(mu + opt.coverage_sds * sd, dist.atom_value(dist.atoms().rbegin()->first));
  const auto k_lo = static_cast<std::int64_t>(std::floor((lo_val - anchor) / step));
  const auto k_hi = static_cast<std::int64_t>(std::ceil((hi_val - anchor) / step));

  const double total = dist.n_samples();
  auto interval_mass = [&](std::int64_t k, double u) -> double {
    if (dist.kind() == DistributionKind::RealBinned) {
      auto it = dist.atoms().find(k);
      return it == dist.atoms().end() ? 0.0 : it->second / total;
    }
    // Integer atoms in [u, u + b).
    const auto first = static_cast<std::int64_t>(std::ceil(u - 1e-9));
    const auto last = static_cast<std::int64_t>(std::ceil(u + b - 1e-9)) - 1;
    double s = 0.0;
    for (auto it = dist.atoms().lower_bound(first); it != dist.atoms().end() && it->first <= last; ++it)
      s += it->second / total;
    return s;
  };

  const std::size_t count = static_cast<std::size_t>(k_hi - k_lo + 1);
  rep.u_grid.reserve(count);
  rep.scaled_probability.reserve(count);
  rep.gaussian.reserve(count);
  rep.probability.reserve(count);
  std::size_t best = 0;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const double u = anchor + static_cast<double>(k) * step;
    const double p = interval_mass(k, u);
    const double g = (b / sigma) * normal_density((u - mu) / sd);
    rep.u_grid.push_back(u);
    rep.probability.push_back(p);
    rep.scaled_probability.push_back(m * p);
    rep.gaussian.push_back(g);
    const double dev = std::abs(m * p - g);
    if (dev > rep.sup_discrepancy || rep.u_grid.size() == 1) {
      rep.sup_discrepancy = dev;
      best = rep.u_grid.size() - 1;
    }
  }
  rep.argmax_u = rep.u_grid[best];

  if (!rep.exact) {
    const double p = rep.probability[best];
    rep.mc_error = m * std::sqrt(p * (1.0 - p) / total);
    // |d gaussian / d mu| * sd(mu_hat) <= (b/sigma) max|phi'| / sqrt(N); the
    // sigma term contributes (b/sigma) max|phi (1 - z^2)| / sqrt(2N).
    constexpr double max_dphi = 0.24197072451914337;  // phi(1)
    constexpr double max_phi = 0.3989422804014327;    // phi(0)
    rep.plugin_error = (b / sigma) * (max_dphi + max_phi / std::numbers::sqrt2) / std::sqrt(total);
  }
  if (dist.kind() == DistributionKind::RealBinned) {
    constexpr double max_dphi = 0.24197072451914337;
    rep.continuity_bound = (b / sigma) * max_dphi * b / sd;
  }
  rep.kolmogorov_distance = kolmogorov_to_normal(dist, mu, sd);
  return rep;
}

/// Outcome of comparing a discrepancy series across a size ladder.
struct DecreaseVerdict {
  bool final_step_decrease = false;  // sup[k-1] - sup[k] > err[k-1] + err[k]
  bool no_large_increase = true;     // sup[i+1] - sup[i] <= 2 (err[i] + err[i+1])
  bool strictly_decreasing = true;   // point estimates only
  bool passed() const { return final_step_decrease && no_large_increase; }
};

inline DecreaseVerdict assess_decrease(std::span<const LocalCltReport> series) {
  DecreaseVerdict v;
  if (series.size() < 2) {
    v.final_step_decrease = false;
    return v;
  }
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double e = series[i].combined_error() + series[i + 1].combined_error();
    const double delta = series[i + 1].sup_discrepancy - series[i].sup_discrepancy;
    if (delta > 2.0 * e) v.no_large_increase = false;
    if (!(delta < 0.0)) v.strictly_decreasing = false;
  }
  const auto& a = series[series.size() - 2];
  const auto& z = series.back();
  v.final_step_decrease = a.sup_discrepancy - z.sup_discrepancy > a.combined_error() + z.combined_error();
  return v;
}

}  // namespace lclt
