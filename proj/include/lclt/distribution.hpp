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
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lclt {

enum class DistributionKind { IntegerLattice, RealBinned };

/// Law of a functional, either sampled (atoms hold replicate counts) or
/// exact (atoms hold probabilities summing to one).
///
/// Integer-lattice atoms are keyed by the integer value. Real-binned atoms
/// are keyed by bin index k, covering [k b, (k+1) b). Real-binned
/// distributions also keep the raw values, which span estimation and the
/// Kolmogorov distance use.
///
/// Moments of integer-lattice laws are computed from the atom table, so they
/// do not depend on the order in which shards were merged.
class EmpiricalDistribution {
 public:
  static constexpr double kIntegralTolerance = 1e-9;

  static EmpiricalDistribution integer_lattice() { return EmpiricalDistribution(DistributionKind::IntegerLattice, 1.0); }

  static EmpiricalDistribution real_binned(double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
      throw ParameterError("real-binned distribution needs a positive bin width");
    return EmpiricalDistribution(DistributionKind::RealBinned, bin_width);
  }

  /// Exact integer-lattice law from value -> probability. Zero weights are dropped.
  static EmpiricalDistribution exact(const std::map<std::int64_t, double>& weights) {
    EmpiricalDistribution d(DistributionKind::IntegerLattice, 1.0);
    d.exact_ = true;
    for (const auto& [v, w] : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("exact PMF weights must be finite and >= 0");
      if (w > 0.0) {
        d.atoms_[v] = w;
        d.total_ += w;
      }
    }
    return d;
  }

  DistributionKind kind() const noexcept { return kind_; }
  bool is_exact() const noexcept { return exact_; }
  double bin_width() const noexcept { return bin_width_; }
  const std::map<std::int64_t, double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Number of replicates (sampled) or total mass (exact).
  double n_samples() const noexcept { return total_; }
  bool empty() const noexcept { return atoms_.empty(); }

  /// Value represented by an atom key: the integer itself, or the left edge
  /// of the bin.
  double atom_value(std::int64_t key) const noexcept {
    return kind_ == DistributionKind::IntegerLattice ? static_cast<double>(key) : static_cast<double>(key) * bin_width_;
  }

  double probability(std::int64_t key) const {
    auto it = atoms_.find(key);
    return it == atoms_.end() ? 0.0 : it->second / total_;
  }

  void accumulate(double value) {
    if (exact_) throw KindMismatchError("cannot accumulate samples into an exact PMF");
    if (!std::isfinite(value)) throw ParameterError("cannot accumulate a non-finite value");
    if (kind_ == DistributionKind::IntegerLattice) {
      const double r = std::round(value);
      if (std::abs(value - r) > kIntegralTolerance)
        throw KindMismatchError("value " + std::to_string(value) + " is not integral");
      atoms_[static_cast<std::int64_t>(r)] += 1.0;
    } else {
      atoms_[static_cast<std::int64_t>(std::floor(value / bin_width_))] += 1.0;
      values_.push_back(value);
      sum_ += value;
      sum_sq_ += value * value;
    }
    total_ += 1.0;
  }

  /// Adds the replicates of `other` into this distribution.
  void merge(const EmpiricalDistribution& other) {
    if (exact_ || other.exact_) throw KindMismatchError("exact PMFs cannot be merged");
    if (kind_ != other.kind_ || bin_width_ != other.bin_width_)
      throw KindMismatchError("cannot merge distributions of different kinds or bin widths");
    for (const auto& [k, c] : other.atoms_) atoms_[k] += c;
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
    total_ += other.total_;
  }

  double mean() const {
    if (total_ <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (kind_ == DistributionKind::RealBinned) return sum_ / total_;
    return static_cast<double>(lattice_mean());
  }

  /// Unbiased sample variance for sampled laws; exact variance for exact PMFs.
  double variance() const {
    if (kind_ == DistributionKind::RealBinned) {
      if (total_ < 2.0) return 0.0;
      const double mu = sum_ / total_;
      return std::max(0.0, (sum_sq_ - total_ * mu * mu) / (total_ - 1.0));
    }
    if (total_ <= 0.0 || (!exact_ && total_ < 2.0)) return 0.0;
    // Two passes around the mean avoid the cancellation in E[X^2] - E[X]^2.
    const long double mu = lattice_mean();
    long double ss = 0.0L, mass = 0.0L;
    for (const auto& [k, w] : atoms_) {
      const long double x = static_cast<long double>(k) - mu;
      ss += x * x * w;
      mass += w;
    }
    const long double denom = exact_ ? mass : mass - 1.0L;
    return std::max(0.0, static_cast<double>(ss / denom));
  }

  /// True if every observation has the same value.
  bool degenerate() const {
    if (kind_ == DistributionKind::IntegerLattice) return atoms_.size() <= 1;
    for (double v : values_)
      if (v != values_.front()) return false;
    return true;
  }

  /// Atom tables and sample sizes agree (raw-value order is ignored).
  bool same_table(const EmpiricalDistribution& o) const {
    return kind_ == o.kind_ && bin_width_ == o.bin_width_ && exact_ == o.exact_ && atoms_ == o.atoms_ &&
           total_ == o.total_;
  }

  /// CSV with columns `value,weight` (weight = probability).
  void write_csv(std::ostream& os) const {
    os << "value,weight\n";
    os << std::setprecision(17);
    for (const auto& [k, w] : atoms_) os << atom_value(k) << ',' << w / total_ << '\n';
  }

  /// Reads the `value,weight` CSV written by write_csv as an exact
  /// integer-lattice PMF.
  static EmpiricalDistribution read_exact_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("value,weight", 0) != 0)
      throw ParameterError("PMF CSV must start with a 'value,weight' header");
    std::map<std::int64_t, double> w;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ParameterError("malformed PMF CSV row: " + line);
      const double v = std::stod(line.substr(0, comma));
      const double r = std::round(v);
      if (std::abs(v - r) > kIntegralTolerance) throw KindMismatchError("PMF CSV value is not integral: " + line);
      w[static_cast<std::int64_t>(r)] += std::stod(line.substr(comma + 1));
    }
    return exact(w);
  }

 private:
  long double lattice_mean() const {
    const long double ref = static_cast<long double>(atoms_.begin()->first);
    long double s = 0.0L, mass = 0.0L;
    for (const auto& [k, w] : atoms_) {
      s += (static_cast<long double>(k) - ref) * w;
      mass += w;
    }
    return ref + s / mass;
  }

  EmpiricalDistribution(DistributionKind k, double b) : kind_(k), bin_width_(b) {}

  DistributionKind kind_;
  double bin_width_;
  bool exact_ = false;
  std::map<std::int64_t, double> atoms_;
  std::vector<double> values_;
  double total_ = 0.0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

}  // namespace lclt
