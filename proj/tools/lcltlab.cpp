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

// lcltlab: command-line driver for local-CLT experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lclt/lclt.hpp"

namespace {

enum Exit { kAllPass = 0, kCriterionFailure = 1, kSpecError = 2, kResourceCap = 3 };

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
};

const std::map<std::string, std::set<lclt::Model>> kSubcommandModels = {
    {"perc-clusters", {lclt::Model::PercolationClusters}},
    {"perc-largest", {lclt::Model::PercolationLargest}},
    {"rgg", {lclt::Model::RggSubgraph, lclt::Model::RggComponents, lclt::Model::RggIndependence}},
    {"germ-grain", {lclt::Model::GermGrainVolume}},
    {"rsa", {lclt::Model::Rsa}},
    {"knn", {lclt::Model::KnnSum}},
    {"decomp", {lclt::Model::Decomposition}},
};

nlohmann::ordered_json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lclt::ConfigurationError("cannot open config " + path);
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw lclt::ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
}

void print_issues(const lclt::ValidationResult& v) {
  for (const auto& e : v.errors) std::cerr << "error [" << e.code << "] " << e.hypothesis << ": " << e.message << '\n';
  for (const auto& w : v.warnings) std::cerr << "warning [" << w.code << "] " << w.hypothesis << ": " << w.message << '\n';
  for (const auto& n : v.notes) std::cerr << "note: " << n << '\n';
}

int do_validate(const Args& a) {
  auto raw = load_config(a.config);
  if (a.seed) raw["seed"] = *a.seed;
  const auto v = lclt::validate_spec(raw);
  print_issues(v);
  nlohmann::ordered_json out;
  out["schema_version"] = lclt::kSchemaVersion;
  out["valid"] = v.ok();
  out["outside_proved_regime"] = v.outside_proved_regime;
  auto issues = [](const std::vector<lclt::SpecIssue>& xs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& x : xs) arr.push_back({{"code", x.code}, {"hypothesis", x.hypothesis}, {"message", x.message}});
    return arr;
  };
  out["errors"] = issues(v.errors);
  out["warnings"] = issues(v.warnings);
  out["notes"] = v.notes;
  if (v.spec) out["spec"] = lclt::spec_to_json(*v.spec);
  std::cout << out.dump(2) << '\n';
  return v.ok() ? kAllPass : kSpecError;
}

int do_run(const std::string& sub, const Args& a) {
  auto raw = load_config(a.config);
  if (a.seed) raw["seed"] = *a.seed;
  const auto v = lclt::validate_spec(raw);
  print_issues(v);
  if (!v.ok()) return kSpecError;
  if (!kSubcommandModels.at(sub).count(v.spec->model)) {
    std::cerr << "error: model '" << lclt::to_string(v.spec->model) << "' cannot be run by '" << sub << "'\n";
    return kSpecError;
  }
  lclt::RunOptions opt;
  opt.threads = a.threads;
  const lclt::RunReport report = lclt::run(*v.spec, opt);
  const auto format = a.format == "csv" ? lclt::ReportFormat::Csv : lclt::ReportFormat::Json;
  if (!a.out.empty()) {
    for (const auto& p : lclt::emit_report(report, format, a.out)) std::cerr << "wrote " << p.string() << '\n';
  } else if (format == lclt::ReportFormat::Json) {
    std::cout << lclt::report_to_json(report, true).dump(2) << '\n';
  } else {
    lclt::write_summary_csv(report, std::cout);
  }
  for (const auto& s : report.sizes)
    std::cerr << "size " << s.label << ": sup " << s.clt.sup_discrepancy << " +- " << s.clt.combined_error()
              << ", Var/" << s.variance_normalizer << " " << s.variance_ratio << ", span " << s.clt.span.h << '\n';
  for (const auto& vd : report.verdicts)
    std::cerr << vd.criterion << ' ' << vd.check << ": " << vd.status << " (" << vd.detail << ")\n";
  std::cerr << "overall: " << report.overall() << " in " << report.metrics.wall_seconds << " s\n";
  return report.overall() == "fail" ? kCriterionFailure : kAllPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for local central limit theorems"};
  app.require_subcommand(1);
  Args args;
  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"perc-clusters", "open-cluster counts of site percolation on a box ladder"},
      {"perc-largest", "largest open cluster of site percolation on a box ladder"},
      {"rgg", "motif, component or independence counts of random geometric graphs"},
      {"germ-grain", "covered area or volume of a germ-grain union of balls"},
      {"rsa", "accepted particles under random sequential adsorption"},
      {"knn", "power-weighted k-nearest-neighbour distance sums"},
      {"decomp", "exact synthetic decomposition check (no sampling)"},
      {"validate", "parse and lint a configuration without running it"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "JSON experiment spec")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "override the master seed");
    sub->add_option("--threads", args.threads, "worker threads (0: all cores)");
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--format", args.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kAllPass : kSpecError;
  }
  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) return name == "validate" ? do_validate(args) : do_run(name, args);
  } catch (const lclt::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResourceCap;
  } catch (const lclt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSpecError;
  }
  return kSpecError;
}
