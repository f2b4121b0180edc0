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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "continuum.hpp"
#include "decomposition.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "geograph.hpp"
#include "lattice_perc.hpp"
#include "motif.hpp"
#include "points.hpp"

namespace lclt {

inline constexpr int kSchemaVersion = 1;

enum class Model {
  PercolationClusters,
  PercolationLargest,
  RggSubgraph,
  RggComponents,
  RggIndependence,
  GermGrainVolume,
  Rsa,
  KnnSum,
  Decomposition,
};

inline const char* to_string(Model m) {
  switch (m) {
    case Model::PercolationClusters: return "percolation-clusters";
    case Model::PercolationLargest: return "percolation-largest";
    case Model::RggSubgraph: return "rgg-subgraph";
    case Model::RggComponents: return "rgg-components";
    case Model::RggIndependence: return "rgg-independence";
    case Model::GermGrainVolume: return "germ-grain-volume";
    case Model::Rsa: return "rsa";
    case Model::KnnSum: return "knn-sum";
    case Model::Decomposition: return "decomposition";
  }
  return "";
}

inline std::optional<Model> model_from_string(const std::string& s) {
  for (Model m : {Model::PercolationClusters, Model::PercolationLargest, Model::RggSubgraph, Model::RggComponents,
                  Model::RggIndependence, Model::GermGrainVolume, Model::Rsa, Model::KnnSum, Model::Decomposition})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

inline bool is_lattice_model(Model m) { return m == Model::PercolationClusters || m == Model::PercolationLargest; }
inline bool is_continuous_model(Model m) { return m == Model::GermGrainVolume || m == Model::KnnSum; }

/// Scale m_n used in the discrepancy statistic.
enum class ScaleRule { Auto, SqrtSize, Tau };

/// Parameters of the synthetic decomposition model.
struct DecompositionConfig {
  std::map<std::int64_t, double> v_pmf{{0, 0.7}, {1, 0.3}};
  std::string y_kind = "binomial";  // "binomial" (n trials) or "zero"
  double y_p = 0.6;
  double defect_c = 1.0;            // eps_n = c n^(-exponent)
  double defect_exponent = 1.0;
};

struct ExperimentSpec {
  int schema_version = kSchemaVersion;
  Model model = Model::PercolationClusters;

  // lattice models
  std::vector<std::vector<std::int64_t>> boxes;
  double p = 0.5;
  std::optional<double> critical_p;
  double cube_like_floor = 0.02;

  // point models and decomposition
  std::vector<std::uint64_t> ladder;
  DensitySpec density = DensitySpec::unit_cube(2);
  RadiusSchedule schedule = RadiusSchedule::thermodynamic(1.0);
  std::optional<MotifSpec> motif;
  std::size_t component_size_cap = 40;
  std::optional<double> critical_intensity;
  MarkSpec marks = MarkSpec::uniform(0.5, 1.0);
  Integrator integrator = Integrator::exact_arcs();
  unsigned kappa = 1;
  double alpha = 1.0;
  DecompositionConfig decomposition;

  // replication and statistics
  std::uint64_t replicates = 1000;
  std::uint64_t master_seed = 1;
  std::optional<double> bin_width;
  ScaleRule scale = ScaleRule::Auto;
  double resource_cap = 1e9;
  bool keep_values = false;

  std::size_t dimension() const {
    if (is_lattice_model(model)) return boxes.empty() ? 0 : boxes.front().size();
    return density.dim;
  }
  std::size_t ladder_length() const { return is_lattice_model(model) ? boxes.size() : ladder.size(); }
};

struct SpecIssue {
  std::string code;        // short machine-readable id
  std::string hypothesis;  // the modelling assumption this rule enforces
  std::string message;
};

struct ValidationResult {
  std::optional<ExperimentSpec> spec;
  std::vector<SpecIssue> errors;
  std::vector<SpecIssue> warnings;
  std::vector<std::string> notes;
  bool outside_proved_regime = false;

  bool ok() const { return errors.empty() && spec.has_value(); }
};

// ---------------------------------------------------------------------------
// JSON <-> spec

namespace detail {

using json = nlohmann::ordered_json;

inline const char* to_string(DensityKind k) {
  switch (k) {
    case DensityKind::UniformUnitCube: return "uniform-unit-cube";
    case DensityKind::UniformBall: return "uniform-ball";
    case DensityKind::ProductBeta: return "product-beta";
    case DensityKind::CustomGrid: return "custom-grid";
  }
  return "";
}

inline const char* to_string(ScaleRule s) {
  switch (s) {
    case ScaleRule::Auto: return "auto";
    case ScaleRule::SqrtSize: return "sqrt-size";
    case ScaleRule::Tau: return "tau";
  }
  return "";
}

inline const char* to_string(IntegratorKind k) {
  switch (k) {
    case IntegratorKind::Grid: return "grid";
    case IntegratorKind::MonteCarlo: return "monte-carlo";
    case IntegratorKind::ExactArcs: return "exact-arcs";
  }
  return "";
}

}  // namespace detail

/// Canonical JSON form of a spec; fields appear in a fixed order.
inline nlohmann::ordered_json spec_to_json(const ExperimentSpec& s) {
  using detail::json;
  json j;
  j["schema_version"] = s.schema_version;
  j["model"] = to_string(s.model);
  if (is_lattice_model(s.model)) {
    j["boxes"] = s.boxes;
    j["p"] = s.p;
    if (s.critical_p) j["critical_p"] = *s.critical_p;
    j["cube_like_floor"] = s.cube_like_floor;
  } else {
    j["ladder"] = s.ladder;
  }
  if (s.model != Model::Decomposition && !is_lattice_model(s.model)) {
    json d;
    d["kind"] = detail::to_string(s.density.kind);
    d["dimension"] = s.density.dim;
    if (s.density.kind == DensityKind::UniformBall) d["radius"] = s.density.radius;
    if (s.density.kind == DensityKind::ProductBeta) {
      d["alpha"] = s.density.alpha;
      d["beta"] = s.density.beta;
    }
    if (s.density.kind == DensityKind::CustomGrid) {
      d["resolution"] = s.density.resolution;
      d["weights"] = s.density.weights;
    }
    j["density"] = d;
    json sch;
    sch["rule"] = s.schedule.name();
    if (s.schedule.rule == RadiusRule::RhoThermodynamic) sch["rho"] = s.schedule.rho;
    if (s.schedule.rule == RadiusRule::Sparse) {
      sch["beta"] = s.schedule.beta;
      sch["gamma"] = s.schedule.gamma;
    }
    j["schedule"] = sch;
  }
  if (s.motif) {
    json m;
    m["kappa"] = s.motif->kappa;
    json edges = json::array();
    for (auto [a, b] : s.motif->edges) edges.push_back({a, b});
    m["edges"] = edges;
    j["motif"] = m;
  }
  if (s.model == Model::RggIndependence) {
    j["component_size_cap"] = s.component_size_cap;
    if (s.critical_intensity) j["critical_intensity"] = *s.critical_intensity;
  }
  if (s.model == Model::GermGrainVolume) {
    j["marks"] = {{"law", "uniform"}, {"lo", s.marks.lo}, {"hi", s.marks.hi}};
    json in;
    in["kind"] = detail::to_string(s.integrator.kind);
    if (s.integrator.kind == IntegratorKind::Grid) {
      if (s.integrator.auto_spacing)
        in["h"] = "auto";
      else
        in["h"] = s.integrator.h;
    }
    if (s.integrator.kind == IntegratorKind::MonteCarlo) in["samples"] = s.integrator.samples;
    j["integrator"] = in;
  }
  if (s.model == Model::KnnSum) {
    j["kappa"] = s.kappa;
    j["alpha"] = s.alpha;
  }
  if (s.model == Model::Decomposition) {
    json v = json::object();
    for (const auto& [k, w] : s.decomposition.v_pmf) v[std::to_string(k)] = w;
    j["decomposition"] = {{"v_pmf", v},
                          {"y_law", {{"kind", s.decomposition.y_kind}, {"p", s.decomposition.y_p}}},
                          {"defect", {{"c", s.decomposition.defect_c}, {"exponent", s.decomposition.defect_exponent}}}};
  } else {
    j["replicates"] = s.replicates;
    j["seed"] = s.master_seed;
  }
  if (s.bin_width)
    j["bin_width"] = *s.bin_width;
  else
    j["bin_width"] = "auto";
  j["scale"] = detail::to_string(s.scale);
  j["resource_cap"] = s.resource_cap;
  return j;
}

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline MotifSpec parse_motif(const json& m) {
  if (m.is_string()) return MotifSpec::named(m.get<std::string>());
  MotifSpec spec;
  spec.kappa = m.at("kappa").get<unsigned>();
  for (const auto& e : m.value("edges", json::array()))
    spec.edges.emplace_back(e.at(0).get<unsigned>(), e.at(1).get<unsigned>());
  spec.validate();
  return spec;
}

}  // namespace detail

/// Parses a configuration document into a spec without checking modelling
/// hypotheses. Structural problems (missing or mistyped fields) throw
/// ConfigurationError.
inline ExperimentSpec parse_spec(const nlohmann::ordered_json& j) {
  using detail::get_or;
  using detail::json;
  try {
    if (!j.is_object()) throw ConfigurationError("configuration must be a JSON object");
    ExperimentSpec s;
    s.schema_version = get_or<int>(j, "schema_version", kSchemaVersion);
    const auto model = model_from_string(j.at("model").get<std::string>());
    if (!model) throw ConfigurationError("unknown model '" + j.at("model").get<std::string>() + "'");
    s.model = *model;

    if (j.contains("boxes")) s.boxes = j.at("boxes").get<std::vector<std::vector<std::int64_t>>>();
    s.p = get_or<double>(j, "p", s.p);
    if (j.contains("critical_p")) s.critical_p = j.at("critical_p").get<double>();
    s.cube_like_floor = get_or<double>(j, "cube_like_floor", s.cube_like_floor);
    if (j.contains("ladder")) s.ladder = j.at("ladder").get<std::vector<std::uint64_t>>();

    if (j.contains("density")) {
      const auto& d = j.at("density");
      const std::string kind = d.value("kind", std::string("uniform-unit-cube"));
      const auto dim = d.value("dimension", std::size_t{2});
      if (kind == "uniform-unit-cube") {
        s.density = DensitySpec::unit_cube(dim);
      } else if (kind == "uniform-ball") {
        s.density = DensitySpec::ball(dim, d.value("radius", 1.0));
      } else if (kind == "product-beta") {
        s.density = DensitySpec::product_beta(dim, d.value("alpha", 1.0), d.value("beta", 1.0));
      } else if (kind == "custom-grid") {
        s.density = DensitySpec::custom_grid(dim, d.at("resolution").get<std::size_t>(),
                                             d.at("weights").get<std::vector<double>>());
      } else {
        throw ConfigurationError("unknown density kind '" + kind + "'");
      }
    } else if (j.contains("dimension")) {
      s.density = DensitySpec::unit_cube(j.at("dimension").get<std::size_t>());
    }

    if (j.contains("schedule")) {
      const auto& r = j.at("schedule");
      const std::string rule = r.value("rule", std::string("rho-thermodynamic"));
      if (rule == "rho-thermodynamic")
        s.schedule = RadiusSchedule::thermodynamic(r.value("rho", 1.0));
      else if (rule == "sparse")
        s.schedule = RadiusSchedule::sparse(r.value("beta", 1.0), r.at("gamma").get<double>());
      else if (rule == "strong")
        s.schedule = RadiusSchedule::strong();
      else
        throw ConfigurationError("unknown radius schedule '" + rule + "'");
    }
    if (j.contains("motif")) s.motif = detail::parse_motif(j.at("motif"));
    s.component_size_cap = get_or<std::size_t>(j, "component_size_cap", s.component_size_cap);
    if (j.contains("critical_intensity")) s.critical_intensity = j.at("critical_intensity").get<double>();

    if (s.model == Model::Rsa) s.marks = MarkSpec::uniform(0.0, 1.0);
    if (j.contains("marks")) {
      const auto& m = j.at("marks");
      const std::string law = m.value("law", std::string("uniform"));
      if (law == "uniform")
        s.marks = MarkSpec::uniform(m.value("lo", 0.0), m.value("hi", 1.0));
      else if (law == "constant")
        s.marks = MarkSpec::constant(m.at("value").get<double>());
      else
        throw ConfigurationError("unknown mark law '" + law + "'");
    }
    if (j.contains("integrator")) {
      const auto& in = j.at("integrator");
      const std::string kind = in.value("kind", std::string("exact-arcs"));
      if (kind == "grid") {
        if (!in.contains("h") || (in.at("h").is_string() && in.at("h").get<std::string>() == "auto"))
          s.integrator = Integrator::grid_auto();
        else
          s.integrator = Integrator::grid(in.at("h").get<double>());
      } else if (kind == "monte-carlo") {
        s.integrator = Integrator::monte_carlo(in.at("samples").get<std::size_t>(), 0);
      } else if (kind == "exact-arcs") {
        s.integrator = Integrator::exact_arcs();
      } else {
        throw ConfigurationError("unknown integrator '" + kind + "'");
      }
    } else if (s.model == Model::GermGrainVolume && s.density.dim != 2) {
      s.integrator = Integrator::grid_auto();
    }
    s.kappa = get_or<unsigned>(j, "kappa", s.kappa);
    s.alpha = get_or<double>(j, "alpha", s.alpha);

    if (j.contains("decomposition")) {
      const auto& d = j.at("decomposition");
      if (d.contains("v_pmf")) {
        s.decomposition.v_pmf.clear();
        for (const auto& [k, w] : d.at("v_pmf").items()) s.decomposition.v_pmf[std::stoll(k)] = w.get<double>();
      }
      if (d.contains("y_law")) {
        s.decomposition.y_kind = d.at("y_law").value("kind", std::string("binomial"));
        s.decomposition.y_p = d.at("y_law").value("p", 0.6);
      }
      if (d.contains("defect")) {
        s.decomposition.defect_c = d.at("defect").value("c", 1.0);
        s.decomposition.defect_exponent = d.at("defect").value("exponent", 1.0);
      }
    }

    s.replicates = get_or<std::uint64_t>(j, "replicates", s.replicates);
    s.master_seed = get_or<std::uint64_t>(j, "seed", s.master_seed);
    if (j.contains("bin_width") && !j.at("bin_width").is_string()) s.bin_width = j.at("bin_width").get<double>();
    if (j.contains("scale")) {
      const std::string sc = j.at("scale").get<std::string>();
      if (sc == "auto")
        s.scale = ScaleRule::Auto;
      else if (sc == "sqrt-size")
        s.scale = ScaleRule::SqrtSize;
      else if (sc == "tau")
        s.scale = ScaleRule::Tau;
      else
        throw ConfigurationError("unknown scale rule '" + sc + "'");
    }
    s.resource_cap = get_or<double>(j, "resource_cap", s.resource_cap);
    s.keep_values = get_or<bool>(j, "keep_values", s.keep_values);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed configuration: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigurationError(std::string("invalid parameter: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Hypothesis lint

namespace detail {

inline void lint_lattice(const ExperimentSpec& s, ValidationResult& r) {
  auto error = [&](std::string code, std::string hyp, std::string msg) {
    r.errors.push_back({std::move(code), std::move(hyp), std::move(msg)});
  };
  auto warn = [&](std::string code, std::string hyp, std::string msg) {
    r.warnings.push_back({std::move(code), std::move(hyp), std::move(msg)});
  };
  if (s.boxes.empty()) {
    error("empty-ladder", "growing box sequence", "percolation models need at least one box");
    return;
  }
  const std::size_t d = s.boxes.front().size();
  std::vector<LatticeBox> boxes;
  for (const auto& sides : s.boxes) {
    if (sides.size() != d || d == 0) {
      error("box-dimension", "boxes in a common Z^d", "every box must have the same positive dimension");
      return;
    }
    try {
      boxes.push_back(LatticeBox::from_sides(sides));
    } catch (const ParameterError& e) {
      error("box-sides", "nonempty finite boxes", e.what());
      return;
    }
  }
  for (std::size_t i = 1; i < boxes.size(); ++i)
    if (boxes[i].site_count() <= boxes[i - 1].site_count())
      error("ladder-order", "growing box sequence", "box site counts must be strictly increasing");
  if (!(s.p >= 0.0 && s.p <= 1.0)) error("p-range", "site probability in [0,1]", "p must lie in [0,1]");
  if (d < 2 || s.p <= 0.0 || s.p >= 1.0) {
    warn("regime", "d >= 2 and 0 < p < 1", "local CLTs for percolation functionals are only established for d >= 2, 0 < p < 1");
    r.outside_proved_regime = true;
  }
  // Vanishing relative boundary.
  std::string ratios;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const double rel = static_cast<double>(boundary_count(boxes[i])) / static_cast<double>(boxes[i].site_count());
    ratios += (i ? ", " : "") + std::to_string(rel);
    if (i > 0 && rel >= static_cast<double>(boundary_count(boxes[i - 1])) /
                           static_cast<double>(boxes[i - 1].site_count()))
      warn("relative-boundary", "vanishing relative boundary", "|dB|/|B| does not decrease along the ladder");
  }
  r.notes.push_back("relative boundary |dB|/|B| along ladder: " + ratios);

  if (s.model == Model::PercolationLargest) {
    double min_ratio = 1.0;
    bool shrinking = boxes.size() > 1;
    std::string cube;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const double q = boxes[i].cube_like_ratio();
      min_ratio = std::min(min_ratio, q);
      cube += (i ? ", " : "") + std::to_string(q);
      if (i > 0 && q >= boxes[i - 1].cube_like_ratio()) shrinking = false;
    }
    r.notes.push_back("cube-like ratio (min side / max side) along ladder: " + cube);
    if (min_ratio < s.cube_like_floor)
      error("cube-like", "cube-like boxes",
            "min/max side ratio " + std::to_string(min_ratio) + " falls below the floor " +
                std::to_string(s.cube_like_floor));
    else if (shrinking)
      warn("cube-like-trend", "cube-like boxes", "min/max side ratio decreases at every step of the ladder");
    if (!s.critical_p) {
      r.notes.push_back("no critical threshold declared; supercriticality not checked");
    } else if (s.p <= *s.critical_p) {
      warn("supercritical", "p above the critical probability",
           "p = " + std::to_string(s.p) + " is not above the declared critical threshold " +
               std::to_string(*s.critical_p));
      r.outside_proved_regime = true;
    }
  }
}

inline void lint_points(const ExperimentSpec& s, ValidationResult& r) {
  auto error = [&](std::string code, std::string hyp, std::string msg) {
    r.errors.push_back({std::move(code), std::move(hyp), std::move(msg)});
  };
  auto warn = [&](std::string code, std::string hyp, std::string msg) {
    r.warnings.push_back({std::move(code), std::move(hyp), std::move(msg)});
  };
  if (s.ladder.empty()) error("empty-ladder", "growing sample sizes", "ladder must contain at least one size");
  for (std::size_t i = 1; i < s.ladder.size(); ++i)
    if (s.ladder[i] <= s.ladder[i - 1]) error("ladder-order", "growing sample sizes", "ladder must be strictly increasing");
  try {
    s.density.validate();
  } catch (const ParameterError& e) {
    error("density", "bounded density with compact support", e.what());
    return;
  }
  const std::size_t d = s.density.dim;

  // Finite rho: n r_n^d stays bounded.
  if (s.schedule.rule == RadiusRule::Sparse && !(s.schedule.gamma > 1.0 / static_cast<double>(d))) {
    error("rho-finite", "n r_n^d converges to a finite limit",
          "sparse schedule with gamma <= 1/d makes n r_n^d diverge");
    return;
  }
  try {
    s.schedule.validate(d);
  } catch (const ParameterError& e) {
    error("schedule", "n r_n^d converges to a finite limit", e.what());
    return;
  }
  const bool strong = s.schedule.rule == RadiusRule::Strong ||
                      (s.schedule.rule == RadiusRule::RhoThermodynamic && s.schedule.rho == 1.0);

  if (s.model == Model::RggSubgraph) {
    if (!s.motif) {
      error("motif", "connected template graph", "rgg-subgraph needs a motif");
      return;
    }
    if (s.motif->kappa < 2) error("kappa", "kappa >= 2", "induced subgraph counts need a motif with at least 2 vertices");
    if (s.motif->kappa > kMaxMotifOrder) error("kappa-cap", "isomorphism tables", "motifs above 5 vertices are not supported");
    if (s.motif->kappa >= 2) {
      // tau_n^2 = n (n r_n^d)^(kappa-1); sparse schedules give exponent 1 + (1 - gamma d)(kappa - 1).
      if (s.schedule.rule == RadiusRule::Sparse) {
        const double e = 1.0 + (1.0 - s.schedule.gamma * static_cast<double>(d)) * (s.motif->kappa - 1.0);
        if (!(e > 0.0))
          error("tau-diverges", "tau_n^2 = n (n r_n^d)^(kappa-1) tends to infinity",
                "tau_n^2 grows like n^" + std::to_string(e) + ", which does not diverge");
      }
    }
    if (s.density.kind != DensityKind::UniformUnitCube) {
      warn("uniform-density", "uniform density on the unit cube",
           "the subgraph-count local CLT is established for the uniform density only");
      r.outside_proved_regime = true;
    }
  }
  if (s.model == Model::RggComponents && s.motif && s.motif->kappa > kMaxMotifOrder)
    error("kappa-cap", "isomorphism tables", "motifs above 5 vertices are not supported");
  if (s.model == Model::RggIndependence) {
    if (s.component_size_cap < 1 || s.component_size_cap > 64)
      error("component-cap", "exact per-component search", "component_size_cap must lie in [1, 64]");
    if (!s.critical_intensity) {
      r.notes.push_back("no critical intensity declared; subcriticality not checked");
    } else {
      double fmax = 1.0;
      if (s.density.kind == DensityKind::UniformBall) fmax = 1.0 / s.density.support_volume();
      if (s.density.kind == DensityKind::CustomGrid) {
        const auto masses = s.density.grid_masses();
        fmax = *std::max_element(masses.begin(), masses.end()) * std::pow(static_cast<double>(s.density.resolution), static_cast<double>(d));
      }
      if (!(fmax < *s.critical_intensity)) {
        warn("subcritical", "interaction range^d * f_max below the critical intensity",
             "f_max = " + std::to_string(fmax) + " is not below the declared critical intensity");
        r.outside_proved_regime = true;
      }
    }
  }
  if (s.model == Model::RggSubgraph || s.model == Model::RggComponents) {
    if (s.schedule.rule == RadiusRule::Sparse && s.model == Model::RggComponents) {
      warn("thermodynamic", "n r_n^d tends to a positive limit", "component-count local CLTs are stated for the thermodynamic limit");
      r.outside_proved_regime = true;
    }
  }
  if (s.model == Model::GermGrainVolume || s.model == Model::Rsa || s.model == Model::RggIndependence ||
      s.model == Model::KnnSum) {
    if (!strong) {
      warn("strong-schedule", "|r_n^-d - n| = O(n^1/2)",
           s.model == Model::Rsa ? "RSA local CLT is only established for r_n = n^(-1/d); other schedules are unverified"
                                 : "schedule does not satisfy |r_n^-d - n| = O(n^1/2)");
      r.outside_proved_regime = true;
    }
  }
  if (s.model == Model::GermGrainVolume) {
    if (!(s.marks.lo >= 0.0) || !(s.marks.upper_bound() >= s.marks.lo) || !std::isfinite(s.marks.upper_bound()))
      error("marks", "bounded nonnegative grain radii", "radius marks must be nonnegative with a finite bound");
    if (s.integrator.kind == IntegratorKind::ExactArcs && d != 2)
      error("integrator", "volume integrator", "exact-arcs integrator requires d = 2");
    if (s.integrator.kind == IntegratorKind::Grid && !s.integrator.auto_spacing && !(s.integrator.h > 0.0))
      error("integrator", "volume integrator", "grid spacing must be positive");
    if (s.integrator.kind == IntegratorKind::MonteCarlo && s.integrator.samples == 0)
      error("integrator", "volume integrator", "monte-carlo integrator needs a positive sample count");
  }
  if (s.model == Model::Rsa && !(s.marks.law == MarkLaw::Uniform && s.marks.lo == 0.0 && s.marks.hi == 1.0))
    error("marks", "uniform arrival times on [0,1]", "RSA arrival-time marks must be uniform on [0,1]");
  if (s.model == Model::KnnSum) {
    if (s.kappa < 1) error("kappa", "kappa >= 1", "knn-sum needs kappa >= 1");
    if (!(s.alpha > 0.0)) error("alpha", "alpha > 0", "knn-sum needs alpha > 0");
    for (auto n : s.ladder)
      if (n <= s.kappa)
        error("knn-size", "more than kappa points", "ladder size " + std::to_string(n) + " has no kappa-th neighbour");
    const bool bounded_below =
        s.density.kind == DensityKind::UniformUnitCube || s.density.kind == DensityKind::UniformBall ||
        (s.density.kind == DensityKind::ProductBeta && s.density.alpha == 1.0 && s.density.beta == 1.0);
    if (!bounded_below) {
      warn("density-floor", "density bounded away from zero on a convex support",
           "nearest-neighbour local CLT assumes a density bounded away from zero on a convex support");
      r.outside_proved_regime = true;
    }
  }
}

inline void lint_decomposition(const ExperimentSpec& s, ValidationResult& r) {
  auto error = [&](std::string code, std::string hyp, std::string msg) {
    r.errors.push_back({std::move(code), std::move(hyp), std::move(msg)});
  };
  if (s.ladder.empty()) error("empty-ladder", "growing sample sizes", "ladder must contain at least one size");
  for (std::size_t i = 1; i < s.ladder.size(); ++i)
    if (s.ladder[i] <= s.ladder[i - 1]) error("ladder-order", "growing sample sizes", "ladder must be strictly increasing");
  double total = 0.0;
  for (const auto& [k, w] : s.decomposition.v_pmf) {
    if (!(w >= 0.0)) error("v-law", "V has a probability law", "V weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) error("v-law", "V has a probability law", "V weights must sum to 1");
  if (s.decomposition.y_kind != "binomial" && s.decomposition.y_kind != "zero")
    error("y-law", "Y_n independent of S_n", "y_law.kind must be 'binomial' or 'zero'");
  if (!(s.decomposition.defect_exponent > 0.5) || !(s.decomposition.defect_c >= 0.0))
    error("defect-rate", "sqrt(n) P[Z_n != Y_n + S_n] tends to zero",
          "eps_n = c n^-e needs c >= 0 and e > 1/2");
  if (r.errors.empty()) {
    const auto v = EmpiricalDistribution::exact(s.decomposition.v_pmf);
    const auto h = estimate_span(v);
    if (!h.lattice()) {
      error("v-degenerate", "nondegenerate V", "V is degenerate; its span is infinite and divides no finite b");
    } else if (s.bin_width && !divides(h.h, *s.bin_width)) {
      error("span-divisibility", "b is a multiple of the span of V",
            "b = " + std::to_string(*s.bin_width) + " is not a multiple of the span " + std::to_string(h.h));
    }
  }
}

}  // namespace detail

/// Lints a parsed spec against the modelling hypotheses behind its model.
/// Errors make the spec unusable; warnings mark runs outside the regime where
/// the limit theorems are known to hold.
inline ValidationResult lint_spec(const ExperimentSpec& s) {
  ValidationResult r;
  if (s.schema_version != kSchemaVersion)
    r.errors.push_back({"schema-version", "configuration schema", "unsupported schema_version " + std::to_string(s.schema_version)});
  if (s.model != Model::Decomposition) {
    if (s.replicates < 2) r.errors.push_back({"replicates", "replicated sampling", "at least 2 replicates are needed"});
    else if (s.replicates < 1000)
      r.warnings.push_back({"replicates", "replicated sampling", "distributional claims need at least 1000 replicates"});
  }
  if (s.bin_width && !(*s.bin_width > 0.0)) r.errors.push_back({"bin-width", "positive interval width", "bin_width must be positive"});
  if (!(s.resource_cap > 0.0)) r.errors.push_back({"resource-cap", "resource budget", "resource_cap must be positive"});
  if (s.scale == ScaleRule::Tau && s.model != Model::RggSubgraph)
    r.errors.push_back({"scale", "tau_n scaling", "tau scaling only applies to rgg-subgraph"});

  if (is_lattice_model(s.model))
    detail::lint_lattice(s, r);
  else if (s.model == Model::Decomposition)
    detail::lint_decomposition(s, r);
  else
    detail::lint_points(s, r);
  r.spec = s;
  return r;
}

/// Parses and lints a configuration document.
inline ValidationResult validate_spec(const nlohmann::ordered_json& raw) {
  ExperimentSpec s;
  try {
    s = parse_spec(raw);
  } catch (const ConfigurationError& e) {
    ValidationResult r;
    r.errors.push_back({"malformed", "well-formed configuration", e.what()});
    return r;
  }
  return lint_spec(s);
}

}  // namespace lclt
