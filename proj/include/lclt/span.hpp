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
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"

namespace lclt {

inline constexpr double kInfiniteSpan = std::numeric_limits<double>::infinity();

/// a | b: b is an integer multiple of a, or a = 0. An infinite a divides no
/// finite b.
inline bool divides(double a, double b, double tol = 1e-9) {
  if (a == 0.0) return true;
  if (std::isinf(a)) return std::isinf(b);
  if (!(a > 0.0)) throw ParameterError("divides: a must be >= 0");
  const double q = b / a;
  return q >= 1.0 - tol && std::abs(q - std::round(q)) <= tol;
}

enum class SpanMethod { Gcd, CharacteristicModulus };

struct SpanOptions {
  SpanMethod method = SpanMethod::Gcd;
  // A candidate h passes when |E exp(2 pi i X / h)| > 1 - epsilon.
  double epsilon = 0.05;
  // Candidates h = h_max * j / grid_points, h_max = max_sigmas * sd.
  std::size_t grid_points = 400;
  double max_sigmas = 2.0;
  double gcd_tolerance = 1e-9;
};

struct SpanEstimate {
  double h = 0.0;  // 0: non-lattice verdict; +inf: degenerate
  SpanMethod method = SpanMethod::Gcd;
  std::string confidence_note;

  bool lattice() const { return h > 0.0 && std::isfinite(h); }
  bool operator==(const SpanEstimate&) const = default;
};

inline const char* to_string(SpanMethod m) { return m == SpanMethod::Gcd ? "gcd" : "characteristic-modulus"; }

namespace detail {

inline double real_gcd(double a, double b, double tol) {
  a = std::abs(a);
  b = std::abs(b);
  while (b > tol) {
    double r = std::fmod(a, b);
    if (b - r <= tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

struct WeightedValue {
  double x;
  double w;
};

inline std::vector<WeightedValue> weighted_values(const EmpiricalDistribution& dist) {
  std::vector<WeightedValue> out;
  if (dist.kind() == DistributionKind::RealBinned && !dist.values().empty()) {
    out.reserve(dist.values().size());
    for (double v : dist.values()) out.push_back({v, 1.0});
  } else {
    for (const auto& [k, w] : dist.atoms()) out.push_back({dist.atom_value(k), w});
  }
  return out;
}

inline double characteristic_modulus(const std::vector<WeightedValue>& xs, double ref, double h) {
  double re = 0.0, im = 0.0, total = 0.0;
  const double omega = 2.0 * std::numbers::pi / h;
  for (const auto& [x, w] : xs) {
    const double t = omega * (x - ref);
    re += w * std::cos(t);
    im += w * std::sin(t);
    total += w;
  }
  return std::hypot(re, im) / total;
}

}  // namespace detail

/// Estimated span of the law behind `dist`. Degenerate samples give +inf.
///
/// Gcd: greatest common divisor of the differences from the first atom
/// (exact on integer lattices, tolerance-based on raw reals).
/// CharacteristicModulus: the largest h on the candidate grid whose
/// empirical characteristic function modulus at 2 pi / h exceeds
/// 1 - epsilon; 0 when none does.
inline SpanEstimate estimate_span(const EmpiricalDistribution& dist, const SpanOptions& opt = {}) {
  SpanEstimate est;
  est.method = opt.method;
  if (dist.n_samples() <= 0.0) throw ParameterError("estimate_span: empty distribution");
  if (dist.degenerate()) {
    est.h = kInfiniteSpan;
    est.confidence_note = "degenerate sample: all values equal";
    return est;
  }
  const auto xs = detail::weighted_values(dist);
  const double ref = xs.front().x;

  if (opt.method == SpanMethod::Gcd) {
    if (dist.kind() == DistributionKind::IntegerLattice) {
      std::int64_t g = 0;
      const std::int64_t r0 = dist.atoms().begin()->first;
      for (const auto& [k, w] : dist.atoms()) g = std::gcd(g, k - r0);
      est.h = static_cast<double>(g);
      est.confidence_note = "exact integer gcd of observed differences";
    } else {
      double g = 0.0, spread = 0.0;
      for (const auto& [x, w] : xs) {
        g = detail::real_gcd(g, x - ref, opt.gcd_tolerance);
        spread = std::max(spread, std::abs(x - ref));
      }
      // A gcd collapsing towards the tolerance means no common lattice.
      if (g <= 1e3 * opt.gcd_tolerance * std::max(1.0, spread)) {
        est.h = 0.0;
        est.confidence_note = "real gcd collapsed to tolerance: non-lattice";
      } else {
        est.h = g;
        est.confidence_note = "real gcd to tolerance " + std::to_string(opt.gcd_tolerance);
      }
    }
    return est;
  }

  const double sd = std::sqrt(dist.variance());
  const double h_max = opt.max_sigmas * sd;
  std::vector<double> candidates;
  if (dist.kind() == DistributionKind::IntegerLattice) {
    // Integer-valued data: spans are positive integers.
    for (auto h = static_cast<std::int64_t>(std::max(1.0, std::floor(h_max))); h >= 1; --h)
      candidates.push_back(static_cast<double>(h));
  } else {
    for (std::size_t j = opt.grid_points; j >= 1; --j)
      candidates.push_back(h_max * static_cast<double>(j) / static_cast<double>(opt.grid_points));
  }
  for (double h : candidates) {
    if (detail::characteristic_modulus(xs, ref, h) > 1.0 - opt.epsilon) {
      est.h = h;
      est.confidence_note = "largest candidate with modulus > 1 - " + std::to_string(opt.epsilon);
      return est;
    }
  }
  est.h = 0.0;
  est.confidence_note = "no candidate up to " + std::to_string(opt.max_sigmas) +
                        " sd reached modulus 1 - " + std::to_string(opt.epsilon) + ": non-lattice";
  return est;
}

}  // namespace lclt
