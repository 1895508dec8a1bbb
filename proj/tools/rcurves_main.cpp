// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rcurves/experiment.hpp"

namespace {

using rcurves::Config;
using rcurves::OrderedJson;
using rcurves::RunOutcome;

struct CommonArgs {
  std::string config_path;
  bool json = false;
  bool stable = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> field;
  std::optional<std::uint64_t> prime;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->required();
  cmd->add_flag("--json", args.json, "emit the full JSON report");
  cmd->add_flag("--stable", args.stable, "omit wall-clock timings (byte-stable output)");
  cmd->add_option("--seed", [&args](const CLI::results_t& r) {
    args.seed = std::stoull(r[0]);
    return true;
  }, "override the config seed");
  cmd->add_option("--trials", [&args](const CLI::results_t& r) {
    args.trials = std::stoi(r[0]);
    return true;
  }, "override the experiment trial count");
  cmd->add_option("--field", [&args](const CLI::results_t& r) {
    args.field = r[0];
    return true;
  }, "override the field: q or fp");
  cmd->add_option("--prime", [&args](const CLI::results_t& r) {
    args.prime = std::stoull(r[0]);
    return true;
  }, "override the prime");
}

Config load_with_overrides(const CommonArgs& args) {
  Config cfg = rcurves::load_config_file(args.config_path);
  if (args.seed) cfg.field.seed = *args.seed;
  if (args.prime) cfg.field.prime = *args.prime;
  if (args.field) {
    if (*args.field == "q" || *args.field == "rationals")
      cfg.field.kind = rcurves::FieldKind::rationals;
    else if (*args.field == "fp" || *args.field == "prime-field")
      cfg.field.kind = rcurves::FieldKind::prime_field;
    else
      throw rcurves::ConfigError("--field must be q or fp");
  }
  if (args.trials) {
    if (!cfg.experiment) throw rcurves::ConfigError("--trials needs an experiment in the config");
    cfg.experiment->trials = *args.trials;
  }
  rcurves::validate_field_config(cfg.field);
  return cfg;
}

void print_human(const std::string& command, const OrderedJson& j) {
  if (j.contains("hypothesis")) {
    const auto& h = j["hypothesis"];
    std::cout << "hypotheses: " << h["verdict"].get<std::string>() << "  (clause "
              << h["clause"].get<std::string>() << ")\n";
    std::cout << "  factor margins: " << h["factor_margins"].dump() << "\n";
    std::cout << "  center margins: " << h["center_margins"].dump() << "\n";
  }
  if (j.contains("beta"))
    std::cout << "class: degrees " << j["beta"]["degrees"].dump() << ", e_total "
              << j["beta"]["e_total"].dump() << ", e_strict " << j["beta"]["e_strict"].dump()
              << "\n";
  if (j.contains("dims")) {
    const auto& d = j["dims"];
    std::cout << "expected dim of the morphism space: " << d["expected_dim_mor"] << "\n";
    std::cout << "expected fiber dim: " << d["expected_fiber_dim"]
              << (d["expected_empty"].get<bool>() ? "  (expected empty)" : "") << "\n";
    std::cout << "freeness twist: " << d["freeness_twist"] << "\n";
    if (d.contains("single_center_margin"))
      std::cout << "single-center margin: " << d["single_center_margin"] << "\n";
  }
  if (j.contains("fiber")) {
    const auto& f = j["fiber"];
    std::cout << "fiber: projective dim " << f["projective_dim"] << " (affine " << f["affine_dim"]
              << ", " << f["rows"] << " rows, rank " << f["rank"] << ")\n";
    std::cout << "  kernel sheaf splitting: " << f["splitting"].dump() << " within bounds "
              << f["splitting_bounds"].dump() << ": "
              << (f["splitting_within_bounds"].get<bool>() ? "yes" : "NO") << "\n";
    if (f.contains("expected_dim"))
      std::cout << "  expected " << f["expected_dim"] << ": "
                << (f["matches_expected"].get<bool>() ? "matches" : "DIFFERS") << "\n";
  }
  if (j.contains("member")) {
    const auto& m = j["member"];
    if (m.contains("error")) {
      std::cout << "sample: FAILED (" << m["error"].get<std::string>() << ")\n";
    } else {
      std::cout << "sample: contacts "
                << (m["contacts_exact"].get<bool>() ? "exact" : "NOT exact") << ", splitting "
                << m["tangent_splitting"].dump() << ", twist " << m["twist"] << " vanishes: "
                << (m["twist_vanishes"].get<bool>() ? "yes" : "NO") << ", free: "
                << (m["free"].get<bool>() ? "yes" : "NO") << " (attempt " << m["attempts"]
                << ")\n";
    }
  }
  if (j.contains("experiment")) {
    const auto& e = j["experiment"];
    std::cout << "experiment " << e["kind"].get<std::string>() << ": " << e["passes"] << "/"
              << e["trials"] << " trials passed (threshold " << e["threshold"].get<std::string>()
              << ") -> " << e["verdict"].get<std::string>() << "\n";
  }
  (void)command;
}

int dispatch(const std::string& command, const CommonArgs& args) {
  Config cfg = load_with_overrides(args);
  RunOutcome out;
  if (command == "check")
    out = rcurves::run_check(cfg);
  else if (command == "dims")
    out = rcurves::run_dims(cfg);
  else if (command == "solve")
    out = rcurves::run_solve(cfg, args.stable);
  else if (command == "sample")
    out = rcurves::run_sample(cfg, args.stable);
  else
    out = rcurves::run_verify(cfg, args.stable);
  if (args.json)
    std::cout << out.report.dump(2) << "\n";
  else
    print_human(command, out.report);
  return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic experiments on rational curves through blowup towers"};
  app.require_subcommand(1);

  CommonArgs args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check", "evaluate the numerical hypotheses of a tower and class"},
      {"dims", "expected dimensions, margins and twists"},
      {"solve", "compile and solve one incidence or jet fiber"},
      {"sample", "solve a fiber and draw a diagnosed member"},
      {"verify", "run the configured experiment suite"},
  };
  for (const auto& [name, desc] : commands) add_common(app.add_subcommand(name, desc), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), args);
  } catch (const rcurves::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rcurves::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
