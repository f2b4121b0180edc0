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

#include "errors.hpp"

namespace lclt {

enum class Tail { Upper, Lower };

/// phi(a) = 1 - a + a log a, with phi(0) = 1 by continuity.
inline double chernoff_rate(double a) { return a == 0.0 ? 1.0 : 1.0 - a + a * std::log(a); }

/// Chernoff bound for a binomial or Poisson variable with mean mu:
///   P[X >= x] <= exp(-mu phi(x/mu)) for x >= mu,
///   P[X <= x] <= exp(-mu phi(x/mu)) for 0 < x <= mu.
inline double chernoff_bound(double mu, double x, Tail tail) {
  if (!(mu > 0.0) || !(x > 0.0)) throw ParameterError("chernoff_bound: mu and x must be positive");
  if (tail == Tail::Upper && x < mu) throw ParameterError("chernoff_bound: upper tail needs x >= mu");
  if (tail == Tail::Lower && x > mu) throw ParameterError("chernoff_bound: lower tail needs x <= mu");
  return std::exp(-mu * chernoff_rate(x / mu));
}

/// Azuma-type bound P[|Y - EY| >= t] <= 2 exp(-t^2 / (2 m K^2)) for a function
/// of m independent inputs, each changing Y by at most K.
inline double bounded_difference_bound(double m, double K, double t) {
  if (!(m > 0.0) || !(K > 0.0) || !(t > 0.0))
    throw ParameterError("bounded_difference_bound: m, K and t must be positive");
  return 2.0 * std::exp(-t * t / (2.0 * m * K * K));
}

}  // namespace lclt
