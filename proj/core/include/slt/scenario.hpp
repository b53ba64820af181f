#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slt/errors.hpp"

namespace slt {

enum class Experiment {
  commutator,
  exponentials,
  bf_identity,
  transport,
  mean_verify,
  uniqueness,
  energy,
  gronwall,
  weak_form,
  muskat,
};

Experiment experiment_from_string(const std::string& s);
std::string experiment_name(Experiment e);

// A batch run description: one experiment, typed key=value parameters,
// master seed, output directory. Unknown keys are hard errors at
// validation time.
struct Scenario {
  std::string name = "run";
  Experiment experiment = Experiment::exponentials;
  std::map<std::string, std::string> params;  // "section.key" -> value
  std::filesystem::path output_root;          // artifacts land in root/name
  std::uint64_t master_seed = 7;
  int threads = 0;  // 0 = auto

  std::filesystem::path output_dir() const { return output_root / name; }

  // Typed parameter access with defaults.
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
};

/// Flat INI parser: [section] headers, key = value lines, # or ; comments.
/// Recognized reserved keys: scenario.name, scenario.experiment,
/// scenario.seed, scenario.threads, scenario.out.
Scenario parse_scenario_file(const std::filesystem::path& file);

/// Applies one "section.key=value" override.
void apply_setting(Scenario& s, const std::string& assignment);

/// Full validation: experiment known, every key in the experiment's
/// allowlist, values parseable. Returns human-readable problems (empty
/// means valid).
std::vector<std::string> validate_scenario(const Scenario& s);

/// Canonical text used for the config hash (sorted keys).
std::string scenario_canonical(const Scenario& s);

/// Executes the experiment, writes artifacts plus the manifest, and returns
/// 0 (pass) or 2 (experiment-level failure). Errors propagate as exceptions.
int run_scenario(const Scenario& s);

/// Stable, sorted listing of drifts, kernels, shift family, presets and
/// experiments.
std::string list_catalog();

}  // namespace slt
