#include "slt/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "slt/drift.hpp"
#include "slt/exponential.hpp"

namespace slt {

namespace {

const std::pair<Experiment, const char*> kExperiments[] = {
    {Experiment::commutator, "commutator"},
    {Experiment::exponentials, "exponentials"},
    {Experiment::bf_identity, "bf_identity"},
    {Experiment::transport, "transport"},
    {Experiment::mean_verify, "mean_verify"},
    {Experiment::uniqueness, "uniqueness"},
    {Experiment::energy, "energy"},
    {Experiment::gronwall, "gronwall"},
    {Experiment::weak_form, "weak_form"},
    {Experiment::muskat, "muskat"},
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Keys shared by every experiment.
const std::set<std::string> kCommonKeys = {
    "grid.n",        "grid.extent", "grid.dim",      "time.horizon",
    "time.steps",    "mc.paths",    "drift.kind",    "drift.cells",
    "mollifier.kernel", "mollifier.epsilon", "experiment.t",
};

const std::set<std::string>& experiment_keys(Experiment e) {
  static const std::map<Experiment, std::set<std::string>> table = {
      {Experiment::commutator,
       {"experiment.eps_ladder", "experiment.ball_radius", "experiment.g",
        "experiment.g_epsilon", "experiment.g_radius"}},
      {Experiment::exponentials, {"stochastic.h", "stochastic.family"}},
      {Experiment::bf_identity, {}},
      {Experiment::transport, {"experiment.drifts", "mc.seeds"}},
      {Experiment::mean_verify,
       {"stochastic.h", "experiment.u0_sigma", "experiment.snapshots"}},
      {Experiment::uniqueness,
       {"experiment.eps_ladder", "experiment.h_count"}},
      {Experiment::energy, {"stochastic.h", "experiment.outputs"}},
      {Experiment::gronwall,
       {"stochastic.h", "experiment.outputs", "experiment.drifts"}},
      {Experiment::weak_form, {}},
      {Experiment::muskat,
       {"muskat.preset", "muskat.sigma", "muskat.h0", "muskat.mobility",
        "muskat.paths", "muskat.mesh_times", "muskat.max_iterations",
        "muskat.fp_tolerance", "muskat.damping", "muskat.snapshots"}},
  };
  return table.at(e);
}

}  // namespace

Experiment experiment_from_string(const std::string& s) {
  for (const auto& [e, name] : kExperiments)
    if (s == name) return e;
  throw ConfigError("unknown experiment: " + s);
}

std::string experiment_name(Experiment e) {
  for (const auto& [exp, name] : kExperiments)
    if (exp == e) return name;
  return "?";
}

double Scenario::get_double(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + " is not a number: " + it->second);
  }
}

int Scenario::get_int(const std::string& key, int fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("parameter " + key + " is not an integer: " + it->second);
  }
}

std::string Scenario::get_string(const std::string& key,
                                 const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<double> Scenario::get_doubles(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("parameter " + key + " has a bad entry: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("parameter " + key + " is empty");
  return out;
}

Scenario parse_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open scenario file: " + file.string());
  Scenario s;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError("empty section name at line " + std::to_string(lineno));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("empty key at line " + std::to_string(lineno));
    if (section.empty())
      throw ConfigError("key outside any section at line " + std::to_string(lineno));
    const std::string full = section + "." + key;
    if (full == "scenario.name") {
      s.name = value;
    } else if (full == "scenario.experiment") {
      s.experiment = experiment_from_string(value);
    } else if (full == "scenario.seed") {
      s.master_seed = std::stoull(value);
    } else if (full == "scenario.threads") {
      s.threads = value == "auto" ? 0 : std::stoi(value);
    } else if (full == "scenario.out") {
      s.output_root = value;
    } else {
      if (s.params.count(full))
        throw ConfigError("duplicate key " + full + " at line " + std::to_string(lineno));
      s.params[full] = value;
    }
  }
  return s;
}

void apply_setting(Scenario& s, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("expected section.key=value, got: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.find('.') == std::string::npos)
    throw ConfigError("expected section.key=value, got: " + assignment);
  s.params[key] = value;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> problems;
  const std::set<std::string>* extra = nullptr;
  try {
    extra = &experiment_keys(s.experiment);
  } catch (const std::exception&) {
    problems.push_back("unknown experiment");
    return problems;
  }
  for (const auto& [key, value] : s.params) {
    if (!kCommonKeys.count(key) && !extra->count(key))
      problems.push_back("unknown key: " + key);
    if (value.empty()) problems.push_back("empty value for key: " + key);
  }
  // Cross-checks on referenced catalog names.
  const int dim = s.get_int("grid.dim", 2);
  if (auto it = s.params.find("drift.kind"); it != s.params.end()) {
    try {
      drift_catalog(it->second, dim, s.get_double("grid.extent", 1.0));
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  if (auto it = s.params.find("mollifier.kernel"); it != s.params.end()) {
    if (it->second != "bump" && it->second != "gaussian_truncated")
      problems.push_back("unknown kernel: " + it->second);
  }
  if (s.name.empty()) problems.push_back("scenario name is empty");
  return problems;
}

std::string scenario_canonical(const Scenario& s) {
  std::ostringstream out;
  out << "scenario.name=" << s.name << '\n'
      << "scenario.experiment=" << experiment_name(s.experiment) << '\n'
      << "scenario.seed=" << s.master_seed << '\n';
  for (const auto& [k, v] : s.params) out << k << '=' << v << '\n';
  return out.str();
}

std::string list_catalog() {
  std::ostringstream out;
  out << "drifts (d=1): ";
  bool first = true;
  for (const auto& n : drift_catalog_names(1)) {
    if (!first) out << ", ";
    out << n;
    first = false;
  }
  out << "\ndrifts (d=2): ";
  first = true;
  for (const auto& n : drift_catalog_names(2)) {
    if (!first) out << ", ";
    out << n;
    first = false;
  }
  out << "\nkernels: bump, gaussian_truncated\n";
  out << "shift family (d=1, full): ";
  const auto family = exponential_family(6, 1, 1.0);
  first = true;
  for (const auto& h : family) {
    if (!first) out << ", ";
    out << h.name;
    first = false;
  }
  out << "\npresets: desk64\n";
  out << "experiments: ";
  std::vector<std::string> names;
  for (const auto& [e, name] : kExperiments) names.push_back(name);
  std::sort(names.begin(), names.end());
  first = true;
  for (const auto& n : names) {
    if (!first) out << ", ";
    out << n;
    first = false;
  }
  out << '\n';
  return out.str();
}

}  // namespace slt
