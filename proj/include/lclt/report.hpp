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
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "experiment.hpp"
#include "local_clt.hpp"

namespace lclt {

struct Verdict {
  std::string criterion;  // acceptance-criterion id, e.g. "AC-5"
  std::string check;
  std::string status;     // pass | fail | outside-proved-regime
  std::string detail;
  bool operator==(const Verdict&) const = default;
};

struct SizeResult {
  std::string label;
  double size = 0.0;  // |B| or n
  std::uint64_t replicates = 0;
  double radius = 0.0;
  double variance_ratio = 0.0;  // Var / normalizer
  std::string variance_normalizer;
  LocalCltReport clt;
  // The aggregated law: atom key -> count (weight for exact laws).
  DistributionKind kind = DistributionKind::IntegerLattice;
  double dist_bin_width = 1.0;
  std::vector<std::pair<std::int64_t, double>> atoms;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<double> values;  // per-replicate values, replicate order; only when requested
  bool operator==(const SizeResult&) const = default;
};

struct RunMetrics {
  double wall_seconds = 0.0;
  double replicates_per_second = 0.0;
  unsigned threads = 1;
  bool operator==(const RunMetrics&) const = default;
};

struct RunReport {
  int schema_version = kSchemaVersion;
  nlohmann::ordered_json spec;
  std::string model;
  std::string regime = "proved";  // or outside-proved-regime
  std::vector<std::string> warnings;
  std::vector<SizeResult> sizes;
  std::vector<Verdict> verdicts;
  std::uint64_t total_replicates = 0;
  RunMetrics metrics;

  /// "fail" if any verdict failed, "pass" if all passed, "none" without verdicts,
  /// otherwise "outside-proved-regime".
  std::string overall() const {
    if (verdicts.empty()) return "none";
    bool all_pass = true;
    for (const auto& v : verdicts) {
      if (v.status == "fail") return "fail";
      if (v.status != "pass") all_pass = false;
    }
    return all_pass ? "pass" : "outside-proved-regime";
  }
  bool operator==(const RunReport&) const = default;
};

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using ojson = nlohmann::ordered_json;

// JSON has no infinities; spans of degenerate laws are written as "inf".
inline ojson number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double read_number_or_inf(const ojson& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigurationError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

inline ojson to_json(const LocalCltReport& r) {
  ojson j;
  j["mu_hat"] = r.mu_hat;
  j["variance"] = r.variance;
  j["sigma2_hat"] = r.sigma2_hat;
  j["m_n"] = r.scale;
  j["b"] = r.bin_width;
  j["sup_discrepancy"] = r.sup_discrepancy;
  j["argmax_u"] = r.argmax_u;
  j["mc_error"] = r.mc_error;
  j["plugin_error"] = r.plugin_error;
  j["continuity_bound"] = r.continuity_bound;
  j["kolmogorov_distance"] = r.kolmogorov_distance;
  j["n_samples"] = r.n_samples;
  j["exact"] = r.exact;
  j["span"] = {{"h", number_or_inf(r.span.h)}, {"method", to_string(r.span.method)}, {"note", r.span.confidence_note}};
  j["u_grid"] = r.u_grid;
  j["scaled_probability"] = r.scaled_probability;
  j["gaussian"] = r.gaussian;
  j["probability"] = r.probability;
  return j;
}

inline LocalCltReport clt_from_json(const ojson& j) {
  LocalCltReport r;
  r.mu_hat = j.at("mu_hat").get<double>();
  r.variance = j.at("variance").get<double>();
  r.sigma2_hat = j.at("sigma2_hat").get<double>();
  r.scale = j.at("m_n").get<double>();
  r.bin_width = j.at("b").get<double>();
  r.sup_discrepancy = j.at("sup_discrepancy").get<double>();
  r.argmax_u = j.at("argmax_u").get<double>();
  r.mc_error = j.at("mc_error").get<double>();
  r.plugin_error = j.at("plugin_error").get<double>();
  r.continuity_bound = j.at("continuity_bound").get<double>();
  r.kolmogorov_distance = j.at("kolmogorov_distance").get<double>();
  r.n_samples = j.at("n_samples").get<double>();
  r.exact = j.at("exact").get<bool>();
  const auto& s = j.at("span");
  r.span.h = read_number_or_inf(s.at("h"));
  r.span.method = s.at("method").get<std::string>() == "gcd" ? SpanMethod::Gcd : SpanMethod::CharacteristicModulus;
  r.span.confidence_note = s.at("note").get<std::string>();
  r.u_grid = j.at("u_grid").get<std::vector<double>>();
  r.scaled_probability = j.at("scaled_probability").get<std::vector<double>>();
  r.gaussian = j.at("gaussian").get<std::vector<double>>();
  r.probability = j.at("probability").get<std::vector<double>>();
  return r;
}

}  // namespace detail

/// Report as JSON with a fixed field order. Timing metrics depend on the
/// machine and thread count, so they are only included on request.
inline nlohmann::ordered_json report_to_json(const RunReport& r, bool with_metrics = true) {
  using detail::ojson;
  ojson j;
  j["schema_version"] = r.schema_version;
  j["model"] = r.model;
  j["spec"] = r.spec;
  j["regime"] = r.regime;
  j["warnings"] = r.warnings;
  j["total_replicates"] = r.total_replicates;
  ojson sizes = ojson::array();
  for (const auto& s : r.sizes) {
    ojson e;
    e["label"] = s.label;
    e["size"] = s.size;
    e["replicates"] = s.replicates;
    e["radius"] = s.radius;
    e["variance_normalizer"] = s.variance_normalizer;
    e["variance_ratio"] = s.variance_ratio;
    e["local_clt"] = detail::to_json(s.clt);
    e["distribution"] = {{"kind", s.kind == DistributionKind::IntegerLattice ? "integer-lattice" : "real-binned"},
                         {"bin_width", s.dist_bin_width},
                         {"atoms", s.atoms}};
    ojson extras = ojson::object();
    for (const auto& [k, v] : s.extras) extras[k] = v;
    e["extras"] = extras;
    if (!s.values.empty()) e["values"] = s.values;
    sizes.push_back(std::move(e));
  }
  j["sizes"] = sizes;
  ojson verdicts = ojson::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"criterion", v.criterion}, {"check", v.check}, {"status", v.status}, {"detail", v.detail}});
  j["verdicts"] = verdicts;
  j["overall"] = r.overall();
  if (with_metrics)
    j["metrics"] = {{"wall_seconds", r.metrics.wall_seconds},
                    {"replicates_per_second", r.metrics.replicates_per_second},
                    {"threads", r.metrics.threads}};
  return j;
}

inline RunReport report_from_json(const nlohmann::ordered_json& j) {
  try {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion)
      throw ConfigurationError("unsupported report schema_version " + std::to_string(r.schema_version));
    r.model = j.at("model").get<std::string>();
    r.spec = j.at("spec");
    r.regime = j.at("regime").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.total_replicates = j.at("total_replicates").get<std::uint64_t>();
    for (const auto& e : j.at("sizes")) {
      SizeResult s;
      s.label = e.at("label").get<std::string>();
      s.size = e.at("size").get<double>();
      s.replicates = e.at("replicates").get<std::uint64_t>();
      s.radius = e.at("radius").get<double>();
      s.variance_normalizer = e.at("variance_normalizer").get<std::string>();
      s.variance_ratio = e.at("variance_ratio").get<double>();
      s.clt = detail::clt_from_json(e.at("local_clt"));
      const auto& d = e.at("distribution");
      s.kind = d.at("kind").get<std::string>() == "integer-lattice" ? DistributionKind::IntegerLattice
                                                                     : DistributionKind::RealBinned;
      s.dist_bin_width = d.at("bin_width").get<double>();
      s.atoms = d.at("atoms").get<std::vector<std::pair<std::int64_t, double>>>();
      for (const auto& [k, v] : e.at("extras").items()) s.extras.emplace_back(k, v.get<double>());
      if (e.contains("values")) s.values = e.at("values").get<std::vector<double>>();
      r.sizes.push_back(std::move(s));
    }
    for (const auto& v : j.at("verdicts"))
      r.verdicts.push_back({v.at("criterion").get<std::string>(), v.at("check").get<std::string>(),
                            v.at("status").get<std::string>(), v.at("detail").get<std::string>()});
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      r.metrics.wall_seconds = m.at("wall_seconds").get<double>();
      r.metrics.replicates_per_second = m.at("replicates_per_second").get<double>();
      r.metrics.threads = m.at("threads").get<unsigned>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kSummaryHeader = "size,mu_hat,sigma2_hat,m_n,b,sup_discrepancy,mc_error,span,verdict";
inline constexpr const char* kPmfHeader = "value,count,frequency,gaussian_prediction,discrepancy";

namespace detail {

inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return nlohmann::json(x).dump();
}

}  // namespace detail

inline void write_summary_csv(const RunReport& r, std::ostream& os) {
  os << kSummaryHeader << '\n';
  const std::string verdict = r.overall();
  for (const auto& s : r.sizes) {
    os << s.label << ',' << detail::fmt(s.clt.mu_hat) << ',' << detail::fmt(s.clt.sigma2_hat) << ','
       << detail::fmt(s.clt.scale) << ',' << detail::fmt(s.clt.bin_width) << ',' << detail::fmt(s.clt.sup_discrepancy)
       << ',' << detail::fmt(s.clt.mc_error) << ',' << detail::fmt(s.clt.span.h) << ',' << verdict << '\n';
  }
}

/// One row per atom: the atom's value (bin left edge for real-binned laws),
/// its count and frequency, the Gaussian prediction for that atom, and the
/// scaled difference m (frequency - prediction).
inline void write_pmf_csv(const SizeResult& s, std::ostream& os) {
  os << kPmfHeader << '\n';
  double total = 0.0;
  for (const auto& [k, c] : s.atoms) total += c;
  const double m = s.clt.scale;
  const double sigma = s.clt.sigma_hat();
  double step = s.dist_bin_width;
  if (s.kind == DistributionKind::IntegerLattice) step = s.clt.span.lattice() ? s.clt.span.h : 1.0;
  for (const auto& [k, c] : s.atoms) {
    const double value = s.kind == DistributionKind::IntegerLattice ? static_cast<double>(k)
                                                                    : static_cast<double>(k) * s.dist_bin_width;
    const double freq = total > 0.0 ? c / total : 0.0;
    double pred = 0.0;
    if (sigma > 0.0 && m > 0.0) pred = (step / (sigma * m)) * normal_density((value - s.clt.mu_hat) / (m * sigma));
    os << detail::fmt(value) << ',' << detail::fmt(c) << ',' << detail::fmt(freq) << ',' << detail::fmt(pred) << ','
       << detail::fmt(m * (freq - pred)) << '\n';
  }
}

enum class ReportFormat { Json, Csv };

/// Writes the report into `dir`. JSON: report.json plus metrics.json. CSV:
/// summary.csv plus pmf_<index>.csv per ladder size.
inline std::vector<std::filesystem::path> emit_report(const RunReport& r, ReportFormat format,
                                                      const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  auto open = [&](const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw Error("cannot open " + p.string() + " for writing");
    written.push_back(p);
    return os;
  };
  if (format == ReportFormat::Json) {
    {
      auto os = open(dir / "report.json");
      os << report_to_json(r, false).dump(2) << '\n';
    }
    auto os = open(dir / "metrics.json");
    os << report_to_json(r, true).at("metrics").dump(2) << '\n';
  } else {
    {
      auto os = open(dir / "summary.csv");
      write_summary_csv(r, os);
    }
    for (std::size_t i = 0; i < r.sizes.size(); ++i) {
      auto os = open(dir / ("pmf_" + std::to_string(i) + ".csv"));
      write_pmf_csv(r.sizes[i], os);
    }
  }
  for (const auto& p : written)
    if (!fs::exists(p)) throw Error("failed to write " + p.string());
  return written;
}

}  // namespace lclt
