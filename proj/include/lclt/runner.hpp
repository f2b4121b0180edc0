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
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "continuum.hpp"
#include "decomposition.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "experiment.hpp"
#include "geograph.hpp"
#include "lattice_perc.hpp"
#include "local_clt.hpp"
#include "points.hpp"
#include "report.hpp"
#include "rng.hpp"

namespace lclt {

struct RunOptions {
  unsigned threads = 1;  // 0: hardware concurrency
};

// Thresholds of the acceptance checks.
inline constexpr double kPercVarianceTolerance = 0.10;
inline constexpr double kRggVarianceTolerance = 0.15;

namespace detail {

struct SizePlan {
  std::string label;
  double size = 0.0;
  std::uint64_t n = 0;
  std::optional<LatticeBox> box;
  double radius = 0.0;
  double m = 1.0;
  double normalizer = 1.0;
  std::string normalizer_name;
};

inline std::vector<SizePlan> plan_sizes(const ExperimentSpec& s) {
  std::vector<SizePlan> plans;
  if (is_lattice_model(s.model)) {
    for (const auto& sides : s.boxes) {
      SizePlan p;
      p.box = LatticeBox::from_sides(sides);
      for (std::size_t j = 0; j < sides.size(); ++j) p.label += (j ? "x" : "") + std::to_string(sides[j]);
      p.size = static_cast<double>(p.box->site_count());
      p.m = std::sqrt(p.size);
      p.normalizer = p.size;
      p.normalizer_name = "|B|";
      plans.push_back(std::move(p));
    }
    return plans;
  }
  for (auto n : s.ladder) {
    SizePlan p;
    p.n = n;
    p.label = std::to_string(n);
    p.size = static_cast<double>(n);
    p.m = std::sqrt(p.size);
    p.normalizer = p.size;
    p.normalizer_name = "n";
    if (s.model != Model::Decomposition) p.radius = s.schedule.radius(n, s.density.dim);
    if (s.model == Model::RggSubgraph) {
      const double tau = tau_n(n, s.schedule, s.motif->kappa, s.density.dim);
      if (s.scale != ScaleRule::SqrtSize) p.m = tau;
      p.normalizer = tau * tau;
      p.normalizer_name = "tau_n^2";
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

template <class Engine>
double evaluate_replicate(const ExperimentSpec& s, const SizePlan& plan, Engine& rng) {
  switch (s.model) {
    case Model::PercolationClusters:
      return static_cast<double>(count_clusters(sample_configuration(*plan.box, s.p, rng)));
    case Model::PercolationLargest:
      return static_cast<double>(largest_cluster(sample_configuration(*plan.box, s.p, rng)));
    case Model::RggSubgraph:
    case Model::RggComponents:
    case Model::RggIndependence: {
      if (s.model == Model::RggSubgraph && s.motif->kappa == 2)
        return static_cast<double>(count_close_pairs(sample_points(plan.n, s.density, rng), plan.radius));
      const GeoGraph g = build_graph(sample_points(plan.n, s.density, rng), plan.radius);
      if (s.model == Model::RggSubgraph) return static_cast<double>(count_induced_subgraphs(g, *s.motif));
      if (s.model == Model::RggComponents)
        return static_cast<double>(s.motif ? count_components_isomorphic(g, *s.motif) : count_components(g));
      return static_cast<double>(independence_number(g, s.component_size_cap));
    }
    case Model::GermGrainVolume: {
      const auto sample = sample_marked_points(plan.n, s.density, s.marks, rng);
      Integrator in = s.integrator;
      if (in.kind == IntegratorKind::MonteCarlo) in.seed = rng();
      return germ_grain_volume(sample, plan.radius, in).value;
    }
    case Model::Rsa:
      return static_cast<double>(rsa_accepted_count(sample_marked_points(plan.n, s.density, s.marks, rng), plan.radius));
    case Model::KnnSum:
      return knn_sum(sample_points(plan.n, s.density, rng), s.kappa, s.alpha, plan.radius);
    case Model::Decomposition:
      break;
  }
  throw ConfigurationError("model has no replicate evaluator");
}

/// values[size][replicate], filled by `threads` workers pulling fixed blocks
/// of replicates from a shared counter. Each slot is written by exactly one
/// worker, so the result does not depend on the schedule.
inline std::vector<std::vector<double>> simulate(const ExperimentSpec& s, const std::vector<SizePlan>& plans,
                                                 unsigned threads) {
  constexpr std::uint64_t kBlock = 64;
  const std::uint64_t reps = s.replicates;
  const std::uint64_t blocks_per_size = (reps + kBlock - 1) / kBlock;
  const std::uint64_t total_blocks = blocks_per_size * plans.size();
  std::vector<std::vector<double>> values(plans.size(), std::vector<double>(reps));

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::uint64_t first_error_block = total_blocks;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= total_blocks || abort.load(std::memory_order_relaxed)) return;
      const auto si = static_cast<std::size_t>(task / blocks_per_size);
      const std::uint64_t begin = (task % blocks_per_size) * kBlock;
      const std::uint64_t end = std::min(reps, begin + kBlock);
      try {
        for (std::uint64_t rep = begin; rep < end; ++rep) {
          auto rng = make_stream({s.master_seed, static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(rep)});
          values[si][rep] = evaluate_replicate(s, plans[si], rng);
        }
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (task < first_error_block) {
          first_error_block = task;
          first_error = std::current_exception();
        }
        abort.store(true);
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return values;
}

inline std::string describe(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline Verdict make_verdict(std::string criterion, std::string check, bool ok, bool outside, std::string detail) {
  std::string status = ok ? "pass" : "fail";
  if (outside) status = "outside-proved-regime";
  return {std::move(criterion), std::move(check), std::move(status), std::move(detail)};
}

inline Verdict variance_verdict(const char* criterion, const std::vector<SizeResult>& sizes, double tol, bool outside) {
  if (sizes.size() < 2)
    return make_verdict(criterion, "variance-stabilization", false, outside, "needs at least two ladder sizes");
  const double a = sizes[sizes.size() - 2].variance_ratio;
  const double z = sizes.back().variance_ratio;
  const double rel = std::abs(z - a) / std::abs(a);
  return make_verdict(criterion, "variance-stabilization", rel < tol, outside,
                      "Var/" + sizes.back().variance_normalizer + " relative change at last step " + describe(rel) +
                          " (tolerance " + describe(tol) + ")");
}

inline Verdict decrease_verdict(const char* criterion, const std::vector<SizeResult>& sizes, bool outside) {
  std::vector<LocalCltReport> series;
  for (const auto& s : sizes) series.push_back(s.clt);
  const auto v = assess_decrease(series);
  std::string detail = "sup discrepancy";
  for (const auto& r : series) detail += " " + describe(r.sup_discrepancy) + "+-" + describe(r.combined_error());
  detail += v.final_step_decrease ? "; final step decreases beyond errors" : "; final step not beyond errors";
  if (!v.no_large_increase) detail += "; an increase exceeds twice the combined error";
  return make_verdict(criterion, "discrepancy-decrease", v.passed(), outside, detail);
}

inline void assign_verdicts(const ExperimentSpec& s, RunReport& r, bool outside) {
  auto& v = r.verdicts;
  switch (s.model) {
    case Model::PercolationClusters: {
      v.push_back(variance_verdict("AC-5", r.sizes, kPercVarianceTolerance, outside));
      v.push_back(decrease_verdict("AC-5", r.sizes, outside));
      bool unit = true;
      std::string spans;
      for (const auto& z : r.sizes) {
        unit = unit && std::abs(z.clt.span.h - 1.0) < 1e-9;
        spans += " " + describe(z.clt.span.h);
      }
      v.push_back(make_verdict("AC-5", "span", unit, outside, "span estimates:" + spans));
      break;
    }
    case Model::RggSubgraph:
      v.push_back(variance_verdict("AC-6", r.sizes, kRggVarianceTolerance, outside));
      v.push_back(decrease_verdict("AC-6", r.sizes, outside));
      break;
    case Model::GermGrainVolume:
    case Model::KnnSum: {
      v.push_back(decrease_verdict("AC-8", r.sizes, outside));
      bool nonlattice = true;
      std::string spans;
      for (const auto& z : r.sizes) {
        nonlattice = nonlattice && z.clt.span.h == 0.0;
        spans += " " + describe(z.clt.span.h);
      }
      v.push_back(make_verdict("AC-8", "span-non-lattice", nonlattice, outside, "span estimates:" + spans));
      break;
    }
    case Model::Decomposition: {
      bool strict = r.sizes.size() >= 2, bound = true, kol = r.sizes.size() >= 2;
      std::string sups, kols;
      for (std::size_t i = 0; i < r.sizes.size(); ++i) {
        const auto& z = r.sizes[i];
        sups += " " + describe(z.clt.sup_discrepancy);
        double yk = 0.0;
        for (const auto& [k, x] : z.extras) {
          if (k == "variance_bound_holds") bound = bound && x == 1.0;
          if (k == "y_kolmogorov") yk = x;
        }
        kols += " " + describe(yk);
        if (i > 0) {
          strict = strict && z.clt.sup_discrepancy < r.sizes[i - 1].clt.sup_discrepancy;
          double prev = 0.0;
          for (const auto& [k, x] : r.sizes[i - 1].extras)
            if (k == "y_kolmogorov") prev = x;
          kol = kol && yk < prev;
        }
      }
      v.push_back(make_verdict("AC-4", "discrepancy-strict-decrease", strict, outside, "sup discrepancy:" + sups));
      v.push_back(make_verdict("AC-4", "variance-bound", bound, outside, "Var V <= sigma_hat^2 at every size"));
      v.push_back(make_verdict("AC-4", "y-kolmogorov-decrease", kol, outside, "Kolmogorov distance of Y_n:" + kols));
      break;
    }
    default:
      break;
  }
}

inline RunReport run_decomposition(const ExperimentSpec& s, RunReport r, bool outside) {
  const auto& cfg = s.decomposition;
  DecompositionSpec d;
  d.v_law = EmpiricalDistribution::exact(cfg.v_pmf);
  if (cfg.y_kind == "binomial") {
    const double p = cfg.y_p;
    d.y_law = [p](std::uint64_t n) { return exact_binomial_pmf(n, p); };
  }
  const double c = cfg.defect_c, e = cfg.defect_exponent;
  d.defect = [c, e](std::uint64_t n) { return std::min(1.0, c * std::pow(static_cast<double>(n), -e)); };
  d.b = s.bin_width.value_or(1.0);
  for (const auto& pt : decomposition_check(d, s.ladder)) {
    SizeResult z;
    z.label = std::to_string(pt.n);
    z.size = static_cast<double>(pt.n);
    z.variance_normalizer = "n";
    z.variance_ratio = pt.report.variance / z.size;
    z.clt = pt.report;
    z.extras = {{"defect", pt.defect},
                {"variance_v", pt.variance_v},
                {"variance_bound_holds", pt.variance_bound_holds ? 1.0 : 0.0},
                {"y_kolmogorov", pt.y_kolmogorov}};
    // The exact law of Z_n is rebuilt for the PMF table.
    const auto y = cfg.y_kind == "binomial" ? exact_binomial_pmf(pt.n, cfg.y_p) : point_mass(0);
    const auto ys = convolve(y, iid_sum_law(d.v_law, pt.n));
    const auto law = pt.defect > 0.0 ? mixture(ys, shifted(ys, 1), pt.defect) : ys;
    z.atoms.assign(law.atoms().begin(), law.atoms().end());
    r.sizes.push_back(std::move(z));
  }
  assign_verdicts(s, r, outside);
  return r;
}

}  // namespace detail

/// Total site-or-point operations the spec asks for.
inline double planned_operations(const ExperimentSpec& s) {
  if (s.model == Model::Decomposition) return 0.0;
  double ops = 0.0;
  if (is_lattice_model(s.model)) {
    for (const auto& sides : s.boxes) ops += static_cast<double>(LatticeBox::from_sides(sides).site_count());
  } else {
    for (auto n : s.ladder) ops += static_cast<double>(n);
  }
  return ops * static_cast<double>(s.replicates);
}

/// Runs every ladder size of `spec` and assembles the report.
inline RunReport run(const ExperimentSpec& spec, const RunOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const ValidationResult lint = lint_spec(spec);
  if (!lint.ok()) {
    std::string msg = "invalid experiment spec:";
    for (const auto& e : lint.errors) msg += " [" + e.code + "] " + e.message + ";";
    throw ConfigurationError(msg);
  }
  const ExperimentSpec& s = *lint.spec;
  const double ops = planned_operations(s);
  if (ops > s.resource_cap)
    throw ResourceCapError("planned " + detail::describe(ops) + " site/point operations exceed the cap of " +
                           detail::describe(s.resource_cap));

  RunReport r;
  r.spec = spec_to_json(s);
  r.model = to_string(s.model);
  r.regime = lint.outside_proved_regime ? "outside-proved-regime" : "proved";
  for (const auto& w : lint.warnings) r.warnings.push_back(w.hypothesis + ": " + w.message);
  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  r.metrics.threads = threads;

  if (s.model == Model::Decomposition) {
    r = detail::run_decomposition(s, std::move(r), lint.outside_proved_regime);
  } else {
    const auto plans = detail::plan_sizes(s);
    const auto values = detail::simulate(s, plans, threads);
    const bool continuous = is_continuous_model(s.model);
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const auto& plan = plans[i];
      // Accumulation runs serially in replicate order.
      EmpiricalDistribution dist = EmpiricalDistribution::integer_lattice();
      double b = s.bin_width.value_or(1.0);
      if (continuous) {
        if (!s.bin_width) {
          EmpiricalDistribution pilot = EmpiricalDistribution::real_binned(1.0);
          for (double x : values[i]) pilot.accumulate(x);
          const double sd = std::sqrt(pilot.variance());
          if (!(sd > 0.0)) throw DegenerateDistributionError("replicate values have zero variance at size " + plan.label);
          b = sd / plan.m / 4.0;
        }
        dist = EmpiricalDistribution::real_binned(b);
      }
      for (double x : values[i]) dist.accumulate(x);

      SizeResult z;
      z.label = plan.label;
      z.size = plan.size;
      z.replicates = s.replicates;
      z.radius = plan.radius;
      z.clt = local_clt_discrepancy(dist, plan.m, b);
      z.variance_normalizer = plan.normalizer_name;
      z.variance_ratio = z.clt.variance / plan.normalizer;
      z.kind = dist.kind();
      z.dist_bin_width = dist.bin_width();
      z.atoms.assign(dist.atoms().begin(), dist.atoms().end());
      if (plan.box) z.extras.emplace_back("relative_boundary", static_cast<double>(boundary_count(*plan.box)) / plan.size);
      if (s.model == Model::RggSubgraph) z.extras.emplace_back("tau_n", std::sqrt(plan.normalizer));
      if (s.keep_values) z.values = values[i];
      r.sizes.push_back(std::move(z));
    }
    r.total_replicates = s.replicates * plans.size();
    detail::assign_verdicts(s, r, lint.outside_proved_regime);
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.metrics.wall_seconds = secs;
  r.metrics.replicates_per_second = secs > 0.0 ? static_cast<double>(r.total_replicates) / secs : 0.0;
  return r;
}

}  // namespace lclt
