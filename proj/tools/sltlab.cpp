// Batch driver for the stochastic transport laboratory: runs catalog
// experiments described by scenario files or inline flags and writes
// reproducible CSV/PGM artifacts.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slt/io.hpp"
#include "slt/scenario.hpp"

namespace {

struct CliOptions {
  std::string scenario_file;
  std::string experiment;
  std::string name;
  std::string out;
  std::string drift;
  std::string eps;
  std::string shift;
  std::string threads = "auto";
  std::string preset;
  int paths = -1;
  int steps = -1;
  int grid_n = -1;
  double extent = -1.0;
  double t_eval = -1.0;
  std::uint64_t seed = 7;
  bool seed_set = false;
  std::vector<std::string> settings;
};

slt::Scenario build_scenario(const CliOptions& opt, bool need_experiment) {
  slt::Scenario s;
  if (!opt.scenario_file.empty()) s = slt::parse_scenario_file(opt.scenario_file);
  if (!opt.experiment.empty())
    s.experiment = slt::experiment_from_string(opt.experiment);
  else if (need_experiment && opt.scenario_file.empty())
    throw slt::ConfigError("no experiment given (positional arg or --scenario)");
  if (!opt.name.empty())
    s.name = opt.name;
  else if (opt.scenario_file.empty())
    s.name = slt::experiment_name(s.experiment);
  if (opt.seed_set) s.master_seed = opt.seed;
  if (!opt.out.empty()) s.output_root = opt.out;
  if (opt.threads != "auto") s.threads = std::stoi(opt.threads);

  if (!opt.drift.empty()) s.params["drift.kind"] = opt.drift;
  if (!opt.eps.empty()) s.params["experiment.eps_ladder"] = opt.eps;
  if (!opt.shift.empty()) s.params["stochastic.h"] = opt.shift;
  if (!opt.preset.empty()) s.params["muskat.preset"] = opt.preset;
  if (opt.paths >= 0) s.params["mc.paths"] = std::to_string(opt.paths);
  if (opt.steps >= 0) s.params["time.steps"] = std::to_string(opt.steps);
  if (opt.grid_n >= 0) s.params["grid.n"] = std::to_string(opt.grid_n);
  if (opt.extent > 0.0) s.params["grid.extent"] = slt::format_double(opt.extent);
  if (opt.t_eval >= 0.0) s.params["experiment.t"] = slt::format_double(opt.t_eval);
  for (const auto& a : opt.settings) slt::apply_setting(s, a);
  return s;
}

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--scenario", opt.scenario_file, "scenario file (INI)");
  cmd->add_option("--name", opt.name, "scenario name (artifact subdirectory)");
  cmd->add_option("--out", opt.out, "output root (overrides SLTLAB_OUT)");
  cmd->add_option("--seed", opt.seed, "master seed")
      ->each([&opt](const std::string&) { opt.seed_set = true; });
  cmd->add_option("--threads", opt.threads, "worker threads (number or auto)");
  cmd->add_option("--set", opt.settings, "override: section.key=value")
      ->take_all();
  cmd->add_option("--drift", opt.drift, "drift catalog name");
  cmd->add_option("--eps", opt.eps, "epsilon ladder, comma separated");
  cmd->add_option("--h", opt.shift, "shift spec: zero|const:<c>|step|sin:<k>");
  cmd->add_option("--paths", opt.paths, "Monte-Carlo path count");
  cmd->add_option("--steps", opt.steps, "time steps");
  cmd->add_option("--grid", opt.grid_n, "grid points per axis");
  cmd->add_option("--extent", opt.extent, "box half-width");
  cmd->add_option("--t", opt.t_eval, "evaluation time");
  cmd->add_option("--preset", opt.preset, "named preset (muskat: desk64)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic linear transport laboratory"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  CliOptions run_opt, val_opt;

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  run_cmd->add_option("experiment", run_opt.experiment,
                      "experiment name (see list-catalog)");
  add_common_flags(run_cmd, run_opt);

  CLI::App* val_cmd =
      app.add_subcommand("validate", "parse and validate without running");
  val_cmd->add_option("experiment", val_opt.experiment, "experiment name");
  add_common_flags(val_cmd, val_opt);

  CLI::App* list_cmd = app.add_subcommand("list-catalog", "print the catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (list_cmd->parsed()) {
      std::cout << slt::list_catalog();
      return 0;
    }
    if (val_cmd->parsed()) {
      const slt::Scenario s = build_scenario(val_opt, true);
      const auto problems = slt::validate_scenario(s);
      if (problems.empty()) {
        std::cout << "ok: " << slt::experiment_name(s.experiment) << " '"
                  << s.name << "'\n";
        return 0;
      }
      for (const auto& p : problems) std::cerr << "error: " << p << '\n';
      return 1;
    }
    const slt::Scenario s = build_scenario(run_opt, true);
    const int status = slt::run_scenario(s);
    std::cout << (status == 0 ? "PASS" : "FAIL") << ' '
              << slt::experiment_name(s.experiment) << " -> "
              << (s.output_root.empty() ? std::string("out") : s.output_root.string())
              << '/' << s.name << '\n';
    return status;
  } catch (const slt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
