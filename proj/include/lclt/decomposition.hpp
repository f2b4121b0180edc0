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
#include <functional>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "local_clt.hpp"
#include "span.hpp"

namespace lclt {

/// Synthetic triple (Y_n, S_n, Z_n): S_n is a sum of n i.i.d. copies of V,
/// Y_n is independent of S_n, and Z_n = Y_n + S_n except that with
/// probability eps_n it is shifted up by one.
struct DecompositionSpec {
  EmpiricalDistribution v_law = point_mass(0);
  std::function<EmpiricalDistribution(std::uint64_t)> y_law = [](std::uint64_t) { return point_mass(0); };
  std::function<double(std::uint64_t)> defect = [](std::uint64_t) { return 0.0; };
  double b = 1.0;
  // m_n; defaults to sqrt(n).
  std::function<double(std::uint64_t)> scale;
};

struct DecompositionPoint {
  std::uint64_t n = 0;
  double defect = 0.0;
  LocalCltReport report;       // Z_n
  double variance_v = 0.0;
  bool variance_bound_holds = false;  // Var V <= sigma_hat^2
  double y_kolmogorov = 0.0;   // (Y_n - E Y_n)/sqrt(n) vs N(0, sigma_hat^2 - Var V)
};

/// Law of V_1 + ... + V_n by binary powering.
inline EmpiricalDistribution iid_sum_law(const EmpiricalDistribution& v, std::uint64_t n) {
  EmpiricalDistribution result = point_mass(0);
  EmpiricalDistribution power = v;
  while (n > 0) {
    if (n & 1) result = convolve(result, power);
    n >>= 1;
    if (n > 0) power = convolve(power, power);
  }
  return result;
}

/// Kolmogorov distance of the law of (X - mean) / sqrt(n) to N(0, target_var);
/// a non-positive variance means the point mass at zero.
inline double normalized_kolmogorov(const EmpiricalDistribution& x, double mean, double n, double target_var) {
  if (target_var > 1e-15) return kolmogorov_to_normal(x, mean, std::sqrt(n * target_var));
  // Target CDF is the unit step at `mean`.
  double below = 0.0, at_or_below = 0.0;
  for (const auto& [k, w] : x.atoms()) {
    const double v = x.atom_value(k);
    if (v < mean) below += w / x.n_samples();
    if (v <= mean) at_or_below += w / x.n_samples();
  }
  return std::max(below, 1.0 - at_or_below);
}

inline std::vector<DecompositionPoint> decomposition_check(const DecompositionSpec& spec,
                                                           const std::vector<std::uint64_t>& ladder) {
  if (!spec.v_law.is_exact() || spec.v_law.kind() != DistributionKind::IntegerLattice)
    throw ConfigurationError("decomposition_check: V must be an exact integer-lattice law");
  const SpanEstimate h_v = estimate_span(spec.v_law);
  if (!h_v.lattice())
    throw ConfigurationError("decomposition_check: V is degenerate (span +inf); no finite b is admissible");
  if (!divides(h_v.h, spec.b))
    throw SpanDivisibilityError("decomposition_check: b = " + std::to_string(spec.b) +
                                " is not a multiple of the span of V (" + std::to_string(h_v.h) + ")");
  const double var_v = spec.v_law.variance();

  std::vector<DecompositionPoint> out;
  out.reserve(ladder.size());
  for (std::uint64_t n : ladder) {
    if (n == 0) throw ConfigurationError("decomposition_check: ladder sizes must be positive");
    DecompositionPoint pt;
    pt.n = n;
    pt.defect = spec.defect(n);
    if (!(pt.defect >= 0.0 && pt.defect <= 1.0)) throw ConfigurationError("decomposition_check: eps_n outside [0,1]");
    const EmpiricalDistribution y = spec.y_law(n);
    const EmpiricalDistribution ys = convolve(y, iid_sum_law(spec.v_law, n));
    const EmpiricalDistribution z = pt.defect > 0.0 ? mixture(ys, shifted(ys, 1), pt.defect) : ys;
    const double m = spec.scale ? spec.scale(n) : std::sqrt(static_cast<double>(n));
    pt.report = local_clt_discrepancy(z, m, spec.b);
    pt.variance_v = var_v;
    // Equality holds when Y_n is degenerate and there is no defect; allow for
    // the rounding of repeated exact convolution (about 1e-12 relative at n = 2000).
    pt.variance_bound_holds = var_v <= pt.report.variance / static_cast<double>(n) * (1.0 + 1e-9);
    pt.y_kolmogorov = normalized_kolmogorov(y, y.mean(), static_cast<double>(n),
                                            pt.report.variance / static_cast<double>(n) - var_v);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace lclt
