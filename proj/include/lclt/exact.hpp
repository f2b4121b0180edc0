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

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"

namespace lclt {

inline constexpr std::size_t kMaxExactSupport = 1'000'000;

inline EmpiricalDistribution point_mass(std::int64_t at) { return EmpiricalDistribution::exact({{at, 1.0}}); }

/// Binomial(n, p) PMF. Log-weights are built outward from the mode with the
/// ratio recurrence and normalised at the end, so nothing under- or
/// overflows before normalisation.
inline EmpiricalDistribution exact_binomial_pmf(std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("exact_binomial_pmf: p must lie in [0,1]");
  if (n > kMaxExactSupport) throw SizeError("exact_binomial_pmf: n exceeds 10^6");
  if (p == 0.0) return point_mass(0);
  if (p == 1.0) return point_mass(static_cast<std::int64_t>(n));
  const auto nn = static_cast<double>(n);
  const auto mode = static_cast<std::uint64_t>(std::floor((nn + 1.0) * p) > nn ? nn : std::floor((nn + 1.0) * p));
  // Extended precision keeps the accumulated rounding of the recurrence near
  // 1e-16 relative even for n in the tens of thousands.
  using real = long double;
  const real log_odds = std::log(static_cast<real>(p)) - std::log1p(-static_cast<real>(p));
  const auto nl = static_cast<real>(n);
  std::vector<real> logw(n + 1);
  logw[mode] = 0.0L;
  for (std::uint64_t k = mode; k < n; ++k)
    logw[k + 1] = logw[k] + log_odds + std::log((nl - static_cast<real>(k)) / static_cast<real>(k + 1));
  for (std::uint64_t k = mode; k > 0; --k)
    logw[k - 1] = logw[k] - log_odds - std::log((nl - static_cast<real>(k - 1)) / static_cast<real>(k));
  // Sum smallest terms first.
  real total = 0.0L;
  {
    std::uint64_t lo = 0, hi = n;
    while (lo <= hi) {
      if (logw[lo] <= logw[hi]) {
        total += std::exp(logw[lo]);
        ++lo;
      } else {
        total += std::exp(logw[hi]);
        if (hi == 0) break;
        --hi;
      }
    }
  }
  std::map<std::int64_t, double> w;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const auto v = static_cast<double>(std::exp(logw[k]) / total);
    if (v > 0.0) w.emplace_hint(w.end(), static_cast<std::int64_t>(k), v);
  }
  return EmpiricalDistribution::exact(w);
}

/// Law of A + B for independent integer-valued A and B.
inline EmpiricalDistribution convolve(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.kind() != DistributionKind::IntegerLattice || b.kind() != DistributionKind::IntegerLattice)
    throw KindMismatchError("convolve: both operands must be integer-lattice laws");
  if (a.empty() || b.empty()) throw ParameterError("convolve: empty operand");
  const std::int64_t a0 = a.atoms().begin()->first, a1 = a.atoms().rbegin()->first;
  const std::int64_t b0 = b.atoms().begin()->first, b1 = b.atoms().rbegin()->first;
  const auto la = static_cast<std::size_t>(a1 - a0 + 1), lb = static_cast<std::size_t>(b1 - b0 + 1);
  if (la + lb - 1 > kMaxExactSupport)
    throw SizeError("convolve: result support of " + std::to_string(la + lb - 1) + " atoms exceeds 10^6");
  std::vector<double> da(la, 0.0), db(lb, 0.0), out(la + lb - 1, 0.0);
  for (const auto& [k, w] : a.atoms()) da[static_cast<std::size_t>(k - a0)] = w / a.n_samples();
  for (const auto& [k, w] : b.atoms()) db[static_cast<std::size_t>(k - b0)] = w / b.n_samples();
  for (std::size_t i = 0; i < la; ++i) {
    const double wi = da[i];
    if (wi == 0.0) continue;
    double* o = out.data() + i;
    for (std::size_t j = 0; j < lb; ++j) o[j] += wi * db[j];
  }
  std::map<std::int64_t, double> w;
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k] > 0.0) w.emplace_hint(w.end(), a0 + b0 + static_cast<std::int64_t>(k), out[k]);
  return EmpiricalDistribution::exact(w);
}

/// Law of X + shift.
inline EmpiricalDistribution shifted(const EmpiricalDistribution& x, std::int64_t shift) {
  std::map<std::int64_t, double> w;
  for (const auto& [k, v] : x.atoms()) w[k + shift] = v / x.n_samples();
  return EmpiricalDistribution::exact(w);
}

/// (1 - eps) * law(a) + eps * law(b).
inline EmpiricalDistribution mixture(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ParameterError("mixture: weight must lie in [0,1]");
  std::map<std::int64_t, double> w;
  for (const auto& [k, v] : a.atoms()) w[k] += (1.0 - eps) * v / a.n_samples();
  for (const auto& [k, v] : b.atoms()) w[k] += eps * v / b.n_samples();
  return EmpiricalDistribution::exact(w);
}

/// Total variation distance between two integer-lattice laws.
inline double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  std::map<std::int64_t, double> diff;
  for (const auto& [k, v] : a.atoms()) diff[k] += v / a.n_samples();
  for (const auto& [k, v] : b.atoms()) diff[k] -= v / b.n_samples();
  double s = 0.0;
  for (const auto& [k, v] : diff) s += std::abs(v);
  return 0.5 * s;
}

}  // namespace lclt
