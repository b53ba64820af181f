#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "slt/io.hpp"
#include "slt/meanfield.hpp"
#include "slt/muskat.hpp"
#include "slt/parallel.hpp"
#include "slt/rng.hpp"
#include "slt/scenario.hpp"

namespace slt {

namespace {

// ---------------------------------------------------------------------- //
// Shared helpers

GridSpec scenario_grid(const Scenario& s, int default_n, double default_extent) {
  GridSpec g;
  g.dim = s.get_int("grid.dim", 2);
  g.n = s.get_int("grid.n", default_n);
  g.extent = s.get_double("grid.extent", default_extent);
  g.boundary = Boundary::periodic;
  g.validate();
  return g;
}

ExponentialSpec parse_shift(const std::string& spec, int dim, double horizon) {
  if (spec == "zero") return ExponentialSpec::zero(dim, horizon);
  if (spec.rfind("const:", 0) == 0) {
    std::array<double, 3> c{};
    c[0] = std::stod(spec.substr(6));
    ExponentialSpec h = ExponentialSpec::constant(c, dim, horizon);
    h.name = spec;
    return h;
  }
  if (spec == "step") {
    ExponentialSpec h = ExponentialSpec::zero(dim, horizon);
    h.kind = ShiftKind::step;
    h.amplitude[0] = 1.0;
    h.amplitude_after[0] = -1.0;
    h.name = "step";
    return h;
  }
  if (spec.rfind("sin:", 0) == 0) {
    ExponentialSpec h = ExponentialSpec::zero(dim, horizon);
    h.kind = ShiftKind::sinusoid;
    h.amplitude[0] = 1.0;
    h.angular_frequency =
        std::stod(spec.substr(4)) * 2.0 * std::acos(-1.0) / horizon;
    h.name = spec;
    return h;
  }
  throw ConfigError("unknown shift spec: " + spec);
}

ScalarField gaussian_bump(const GridSpec& g, double sigma, double amplitude = 1.0,
                          const std::array<double, 3>& center = {0.0, 0.0, 0.0}) {
  ScalarField f(g);
  double x[3];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    g.node_position(i, x);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double d = x[a] - center[a];
      r2 += d * d;
    }
    f.values[i] = amplitude * std::exp(-0.5 * r2 / (sigma * sigma));
  }
  return f;
}

ScalarField disk_indicator(const GridSpec& g, double radius) {
  ScalarField f(g);
  double x[3];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    g.node_position(i, x);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
    f.values[i] = r2 <= radius * radius ? 1.0 : 0.0;
  }
  return f;
}

std::vector<std::string> drift_list(const Scenario& s, int dim) {
  const std::string spec = s.get_string("experiment.drifts", "all");
  if (spec == "all") return drift_catalog_names(dim);
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  if (out.empty()) throw ConfigError("experiment.drifts is empty");
  return out;
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "bump") return KernelKind::bump;
  if (name == "gaussian_truncated") return KernelKind::gaussian_truncated;
  throw ConfigError("unknown kernel: " + name);
}

// Monte-Carlo mean and standard error of F_T under a shift, deterministic
// block reduction.
struct ScalarMc {
  double mean = 0.0;
  double se = 0.0;
};

ScalarMc mc_terminal_exponential(const ExponentialSpec& h, int n_paths,
                                 int steps, std::uint64_t seed) {
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = block_count(n_paths, kBlock);
  std::vector<double> sum(blocks, 0.0), sum2(blocks, 0.0);
  parallel_blocks(n_paths, kBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t p = lo; p < hi; ++p) {
      const BrownianPath path = BrownianPath::sample(seed, p, h.dim, h.horizon, steps);
      const double f = exponential_at(h, path, h.horizon);
      s += f;
      s2 += f * f;
    }
    sum[b] = s;
    sum2[b] = s2;
  });
  const double M = n_paths;
  ScalarMc out;
  out.mean = pairwise_sum(sum) / M;
  const double var =
      std::max(0.0, (pairwise_sum(sum2) - M * out.mean * out.mean) / (M - 1.0));
  out.se = std::sqrt(var / M);
  return out;
}

// ---------------------------------------------------------------------- //
// Experiment runners. Each writes CSV artifacts into dir and returns the
// overall pass flag.

bool run_exponentials(const Scenario& s, const std::filesystem::path& dir) {
  const double T = s.get_double("time.horizon", 1.0);
  const int steps = s.get_int("time.steps", 256);
  const int paths = s.get_int("mc.paths", 10000);
  const int dim = s.get_int("grid.dim", 1);

  std::vector<ExponentialSpec> family;
  if (auto one = s.get_string("stochastic.h", ""); !one.empty())
    family.push_back(parse_shift(one, dim, T));
  else
    family = exponential_family(s.get_int("stochastic.family", 5), dim, T);

  CsvWriter csv(dir / "exponentials.csv");
  csv.header({"quantity", "estimate", "std_error", "n_paths", "n_steps", "seed"});
  bool pass = true;
  for (const auto& h : family) {
    const ScalarMc mc = mc_terminal_exponential(h, paths, steps, s.master_seed);
    const bool ok = std::fabs(mc.mean - 1.0) <= 3.0 * mc.se;
    pass = pass && ok;
    csv.row({std::string("E[F_T]:") + h.name, mc.mean, mc.se,
             static_cast<std::int64_t>(paths), static_cast<std::int64_t>(steps),
             s.master_seed});
  }
  return pass;
}

bool run_bf_identity(const Scenario& s, const std::filesystem::path& dir) {
  const double T = s.get_double("time.horizon", 1.0);
  const int steps = s.get_int("time.steps", 256);
  const int paths = s.get_int("mc.paths", 10000);
  const int dim = s.get_int("grid.dim", 1);
  const auto family = exponential_family(3, dim, T);
  const AdaptedKind ys[] = {AdaptedKind::brownian, AdaptedKind::sin_brownian,
                            AdaptedKind::deterministic_shift};

  CsvWriter csv(dir / "bf_identity.csv");
  csv.header({"h", "y", "lhs", "rhs", "se_lhs", "se_rhs", "threshold", "pass"});
  bool pass = true;
  for (const auto& h : family)
    for (AdaptedKind y : ys) {
      const BfIdentityReport rep = verify_bf_identity(h, y, paths, steps, s.master_seed);
      pass = pass && rep.pass;
      csv.row({h.name, adapted_kind_name(y), rep.lhs, rep.rhs, rep.se_lhs,
               rep.se_rhs, rep.threshold,
               static_cast<std::int64_t>(rep.pass ? 1 : 0)});
    }
  return pass;
}

bool run_commutator(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 128, 1.25);
  const auto ladder = s.get_doubles("experiment.eps_ladder", {0.4, 0.2, 0.1, 0.05});
  const double ball = s.get_double("experiment.ball_radius", 1.0);

  const std::string g_kind = s.get_string("experiment.g", "mollified_indicator");
  const double g_radius = s.get_double("experiment.g_radius", 0.5);
  ScalarField field_g;
  if (g_kind == "indicator") {
    field_g = disk_indicator(g, g_radius);
  } else if (g_kind == "mollified_indicator") {
    MollifierSpec mg;
    mg.epsilon = s.get_double("experiment.g_epsilon", 0.2);
    field_g = regularize_scalar(disk_indicator(g, g_radius), mg);
  } else if (g_kind == "gaussian") {
    field_g = gaussian_bump(g, g_radius);
  } else {
    throw ConfigError("unknown experiment.g: " + g_kind);
  }

  const DriftSpec main_drift =
      drift_catalog(s.get_string("drift.kind", "cellular"), g.dim, g.extent);
  const DriftSpec control = drift_catalog("constant", g.dim, g.extent);

  CsvWriter csv(dir / "commutator.csv");
  csv.header({"drift", "epsilon", "l1_norm_ball", "hypothesis_ok"});

  const CommutatorStudy study = commutator_study(main_drift, field_g, ladder, ball);
  for (const auto& row : study.rows)
    csv.row({main_drift.name, row.epsilon, row.l1_norm_ball,
             static_cast<std::int64_t>(study.hypothesis_ok ? 1 : 0)});

  const CommutatorStudy ctrl = commutator_study(control, field_g, ladder, ball);
  double ctrl_max = 0.0;
  for (const auto& row : ctrl.rows) {
    csv.row({control.name, row.epsilon, row.l1_norm_ball,
             static_cast<std::int64_t>(ctrl.hypothesis_ok ? 1 : 0)});
    ctrl_max = std::max(ctrl_max, row.l1_norm_ball);
  }

  bool decay_ok = true;
  for (std::size_t l = 0; l + 1 < study.rows.size(); ++l)
    if (study.rows[l + 1].l1_norm_ball > 1.10 * study.rows[l].l1_norm_ball)
      decay_ok = false;
  decay_ok = decay_ok && study.decayed;

  if (!study.hypothesis_ok) return true;  // decay not required, reported only
  return decay_ok && ctrl_max <= 1e-10;
}

bool run_transport(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 128, 1.25);
  const double T = s.get_double("time.horizon", 0.5);
  const int steps = s.get_int("time.steps", 256);
  const int seeds = s.get_int("mc.seeds", 20);
  const double t = s.get_double("experiment.t", T);
  MollifierSpec m;
  m.epsilon = s.get_double("mollifier.epsilon", 0.1);
  m.kernel = parse_kernel(s.get_string("mollifier.kernel", "bump"));

  const ScalarField u0 =
      regularize_scalar(gaussian_bump(g, s.get_double("experiment.u0_sigma", 0.3)), m);

  CsvWriter csv(dir / "transport_checks.csv");
  csv.header({"drift", "seed", "max_abs_log_jac", "jac_bound", "l2_lhs_sq",
              "l2_rhs_sq", "growth", "jac_pass", "l2_pass"});
  CsvWriter zero_csv(dir / "transport_zero.csv");
  zero_csv.header({"seed", "forward_sup_err", "inverse_sup_err"});

  bool pass = true;
  for (const std::string& name : drift_list(s, g.dim)) {
    const DriftSpec spec = drift_catalog(name, g.dim, g.extent);
    const SampledDrift b_eps = make_mollified_drift(spec, g, m);
    for (int seed_idx = 0; seed_idx < seeds; ++seed_idx) {
      const BrownianPath path =
          BrownianPath::sample(s.master_seed, seed_idx, g.dim, T, steps);

      const JacobianField jac = jacobian_log(b_eps, path, t);
      const double jmax = max_abs(jac.log_jacobian);
      const double jbound = b_eps.div_sup_integral(t) + 1e-8;
      const bool jac_ok = jmax <= jbound;

      const L2BoundReport l2 = l2_bound_check(u0, b_eps, path, t);
      pass = pass && jac_ok && l2.pass;
      csv.row({name, static_cast<std::int64_t>(seed_idx), jmax, jbound,
               l2.lhs_sq, l2.rhs_sq, l2.growth,
               static_cast<std::int64_t>(jac_ok ? 1 : 0),
               static_cast<std::int64_t>(l2.pass ? 1 : 0)});

      if (spec.kind == DriftKind::zero) {
        const FlowField fwd = forward_flow(b_eps, path, t);
        const FlowField bwd = inverse_flow(b_eps, path, t);
        double bt[3];
        path.value_at(mesh_index(path, t), bt);
        double x[3], err_f = 0.0, err_b = 0.0;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
          g.node_position(i, x);
          for (int a = 0; a < g.dim; ++a) {
            err_f = std::max(err_f, std::fabs(fwd.positions[a][i] - (x[a] + bt[a])));
            err_b = std::max(err_b, std::fabs(bwd.positions[a][i] - (x[a] - bt[a])));
          }
        }
        pass = pass && err_f <= 1e-12 && err_b <= 1e-12;
        zero_csv.row({static_cast<std::int64_t>(seed_idx), err_f, err_b});
      }
    }
  }
  return pass;
}

bool run_mean_verify(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 64, 1.25);
  const double T = s.get_double("time.horizon", 0.5);
  const int steps = s.get_int("time.steps", 256);
  const int paths = s.get_int("mc.paths", 10000);
  const double t = s.get_double("experiment.t", T);
  MollifierSpec m;
  m.epsilon = s.get_double("mollifier.epsilon", 0.1);
  m.kernel = parse_kernel(s.get_string("mollifier.kernel", "bump"));

  const DriftSpec spec =
      drift_catalog(s.get_string("drift.kind", "cellular"), g.dim, g.extent);
  const ExponentialSpec h =
      parse_shift(s.get_string("stochastic.h", "zero"), g.dim, T);
  const ScalarField u0 = gaussian_bump(g, s.get_double("experiment.u0_sigma", 0.3));

  const SampledDrift b_eps = make_mollified_drift(spec, g, m);
  const auto ests = estimate_mean_multi(u0, b_eps, {h}, t, paths, steps, s.master_seed);
  const ParabolicRun run = parabolic_solve(u0, b_eps, h, t, {t});
  const MeanCompareReport rep = compare_with_parabolic(ests[0], run);

  CsvWriter csv(dir / "mean_verify.csv");
  csv.header({"drift", "h", "rel_l2", "pooled_se_rel", "frac_z_exceed",
              "threshold", "pass"});
  csv.row({spec.name, h.name, rep.rel_l2, rep.pooled_se_rel, rep.frac_z_exceed,
           rep.threshold, static_cast<std::int64_t>(rep.pass ? 1 : 0)});

  if (s.get_int("experiment.snapshots", 1)) {
    write_field_csv(ests[0].mean, dir / "mean.csv");
    write_field_csv(run.outputs[0], dir / "oracle.csv");
    if (g.dim == 2) {
      write_pgm(ests[0].mean, dir / "mean.pgm");
      write_pgm(run.outputs[0], dir / "oracle.pgm");
    }
  }
  return rep.pass;
}

bool run_uniqueness(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 64, 1.25);
  const double T = s.get_double("time.horizon", 0.5);
  const int steps = s.get_int("time.steps", 256);
  const int paths = s.get_int("mc.paths", 2000);
  const double t = s.get_double("experiment.t", T);
  const auto ladder = s.get_doubles("experiment.eps_ladder", {0.4, 0.2, 0.1});
  const int h_count = s.get_int("experiment.h_count", 3);

  const DriftSpec spec =
      drift_catalog(s.get_string("drift.kind", "cellular"), g.dim, g.extent);
  const ScalarField u0 = gaussian_bump(g, s.get_double("experiment.u0_sigma", 0.3));
  const auto shifts = exponential_family(h_count, g.dim, T);

  const auto reports = uniqueness_experiment(
      u0, spec, ladder, KernelKind::bump, ladder, KernelKind::gaussian_truncated,
      shifts, t, paths, steps, s.master_seed);

  CsvWriter csv(dir / "uniqueness.csv");
  csv.header({"h", "level", "eps_a", "eps_b", "gap", "pooled_se", "scale", "pass"});
  bool pass = true;
  for (const auto& rep : reports) {
    pass = pass && rep.pass;
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
      const auto& lv = rep.levels[l];
      csv.row({rep.shift_name, static_cast<std::int64_t>(l), lv.eps_a, lv.eps_b,
               lv.gap, lv.pooled_se, lv.scale,
               static_cast<std::int64_t>(rep.pass ? 1 : 0)});
    }
  }
  return pass;
}

bool run_energy(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 64, 1.25);
  const double T = s.get_double("time.horizon", 0.5);
  MollifierSpec m;
  m.epsilon = s.get_double("mollifier.epsilon", 0.1);
  const DriftSpec spec =
      drift_catalog(s.get_string("drift.kind", "cellular"), g.dim, g.extent);
  const ExponentialSpec h =
      parse_shift(s.get_string("stochastic.h", "zero"), g.dim, T);
  const ScalarField V0 = gaussian_bump(g, s.get_double("experiment.u0_sigma", 0.3));

  std::vector<double> outputs =
      s.get_doubles("experiment.outputs", {T / 4, T / 2, 3 * T / 4, T});
  const SampledDrift b_eps = make_mollified_drift(spec, g, m);
  const ParabolicRun run = parabolic_solve(V0, b_eps, h, T, outputs);
  const auto rows = energy_series(run);

  CsvWriter csv(dir / "energy.csv");
  csv.header({"t", "energy", "dissipation", "balance_residual"});
  bool pass = true;
  double prev = run.initial_energy;
  const bool divfree = b_eps.div_sup_integral(T) < 1e-10;
  for (const auto& r : rows) {
    csv.row({r.t, r.energy, r.dissipation, r.balance_residual});
    if (!std::isfinite(r.balance_residual)) pass = false;
    if (divfree && r.energy > prev * (1.0 + 1e-12)) pass = false;
    prev = r.energy;
  }
  return pass;
}

bool run_gronwall(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 64, 1.25);
  const double T = s.get_double("time.horizon", 0.5);
  MollifierSpec m;
  m.epsilon = s.get_double("mollifier.epsilon", 0.1);
  const ExponentialSpec h =
      parse_shift(s.get_string("stochastic.h", "zero"), g.dim, T);
  const ScalarField V0 = gaussian_bump(g, s.get_double("experiment.u0_sigma", 0.3));
  std::vector<double> outputs =
      s.get_doubles("experiment.outputs", {T / 4, T / 2, 3 * T / 4, T});

  CsvWriter csv(dir / "gronwall.csv");
  csv.header({"drift", "t", "lhs", "bound", "pass"});
  CsvWriter gcsv(dir / "gronwall_gradient.csv");
  gcsv.header({"drift", "lhs", "bound", "pass"});

  bool pass = true;
  for (const std::string& name : drift_list(s, g.dim)) {
    const DriftSpec spec = drift_catalog(name, g.dim, g.extent);
    const SampledDrift b_eps = make_mollified_drift(spec, g, m);
    const ParabolicRun run = parabolic_solve(V0, b_eps, h, T, outputs);
    const GronwallReport rep = gronwall_check(run);
    pass = pass && rep.pass;
    for (const auto& r : rep.rows)
      csv.row({name, r.t, r.lhs, r.bound, static_cast<std::int64_t>(r.pass ? 1 : 0)});
    gcsv.row({name, rep.gradient_lhs, rep.gradient_bound,
              static_cast<std::int64_t>(rep.gradient_pass ? 1 : 0)});
  }
  return pass;
}

bool run_weak_form(const Scenario& s, const std::filesystem::path& dir) {
  const GridSpec g = scenario_grid(s, 48, 1.25);
  const double T = s.get_double("time.horizon", 0.25);
  const int steps = s.get_int("time.steps", 128);
  MollifierSpec m;
  m.epsilon = s.get_double("mollifier.epsilon", 0.15);
  const DriftSpec spec =
      drift_catalog(s.get_string("drift.kind", "cellular"), g.dim, g.extent);
  const ScalarField u0 = gaussian_bump(g, s.get_double("experiment.u0_sigma", 0.3));

  const SampledDrift b_eps = make_mollified_drift(spec, g, m);
  const BrownianPath path = BrownianPath::sample(s.master_seed, 0, g.dim, T, steps);
  const auto traj = transport_trajectory(u0, b_eps, path, T);

  CsvWriter csv(dir / "weak_form.csv");
  csv.header({"phi", "lhs", "initial", "drift_term", "div_term", "ito_term",
              "laplace_term", "residual"});
  bool pass = true;
  const auto phis = test_function_catalog(g);
  for (std::size_t q = 0; q < phis.size(); ++q) {
    const WeakFormTerms terms = weak_form_residual(traj, b_eps, path, phis[q]);
    pass = pass && std::isfinite(terms.residual);
    csv.row({static_cast<std::int64_t>(q), terms.lhs, terms.initial,
             terms.drift_term, terms.div_term, terms.ito_term,
             terms.laplace_term, terms.residual});
  }
  return pass;
}

bool run_muskat(const Scenario& s, const std::filesystem::path& dir) {
  MuskatConfig cfg;
  const std::string preset = s.get_string("muskat.preset", "desk64");
  if (preset == "desk64")
    cfg = desk64_preset(s.master_seed);
  else
    throw ConfigError("unknown muskat preset: " + preset);

  if (s.params.count("grid.n")) {
    cfg.grid.n = s.get_int("grid.n", cfg.grid.n);
    cfg.rho0 = layered_field(cfg.grid, 1.0, 2.0, 0.0, 0.15, 1, 0.1);
    cfg.nu0 = layered_field(cfg.grid, 1.0, 1.5, 0.0, 0.15, 1, 0.1);
  }
  cfg.sigma = s.get_double("muskat.sigma", cfg.sigma);
  cfg.h0 = s.get_double("muskat.h0", cfg.h0);
  if (auto law = s.get_string("muskat.mobility", ""); !law.empty()) {
    if (law == "constant")
      cfg.mobility = MobilityLaw::constant;
    else if (law == "affine")
      cfg.mobility = MobilityLaw::affine;
    else
      throw ConfigError("unknown mobility law: " + law);
  }
  cfg.n_paths = s.get_int("muskat.paths", cfg.n_paths);
  cfg.mesh_times = s.get_int("muskat.mesh_times", cfg.mesh_times);
  cfg.max_iterations = s.get_int("muskat.max_iterations", cfg.max_iterations);
  cfg.fp_tolerance = s.get_double("muskat.fp_tolerance", cfg.fp_tolerance);
  cfg.damping = s.get_double("muskat.damping", cfg.damping);
  cfg.master_seed = s.master_seed;
  cfg.validate();

  const MuskatResult result = fixed_point_iterate(cfg);

  CsvWriter csv(dir / "muskat_iterations.csv");
  csv.header({"k", "change", "max_div_v", "min_mobility",
              "max_boundary_normal", "phase_min", "phase_max"});
  bool invariants = true;
  for (const auto& it : result.iterations) {
    csv.row({static_cast<std::int64_t>(it.k), it.change, it.max_div_v,
             it.min_mobility, it.max_boundary_normal, it.phase_min, it.phase_max});
    invariants = invariants && it.max_div_v <= 10.0 * 1e-10 &&
                 it.max_boundary_normal == 0.0 &&
                 it.min_mobility >= cfg.h0 - 1e-12 &&
                 it.phase_min >= cfg.phase_lo - 1e-9 &&
                 it.phase_max <= cfg.phase_hi + 1e-9;
  }
  if (s.get_int("muskat.snapshots", 1)) {
    write_pgm(result.mean_rho_final, dir / "muskat_rho_final.pgm");
    write_pgm(result.mean_nu_final, dir / "muskat_nu_final.pgm");
    write_field_csv(result.mean_rho_final, dir / "muskat_rho_final.csv");
  }
  CsvWriter status(dir / "muskat_status.csv");
  status.header({"converged", "non_contractive", "iterations", "fp_tolerance"});
  status.row({static_cast<std::int64_t>(result.converged ? 1 : 0),
              static_cast<std::int64_t>(result.non_contractive ? 1 : 0),
              static_cast<std::int64_t>(result.iterations.size()),
              result.fp_tolerance});
  return invariants;
}

}  // namespace

int run_scenario(const Scenario& s) {
  const auto problems = validate_scenario(s);
  if (!problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  set_thread_count(s.threads);

  std::filesystem::path root = s.output_root;
  if (root.empty()) {
    if (const char* env = std::getenv("SLTLAB_OUT"))
      root = env;
    else
      root = "out";
  }
  Scenario resolved = s;
  resolved.output_root = root;
  const std::filesystem::path dir = resolved.output_dir();
  std::filesystem::create_directories(dir);

  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  switch (s.experiment) {
    case Experiment::commutator:
      pass = run_commutator(resolved, dir);
      break;
    case Experiment::exponentials:
      pass = run_exponentials(resolved, dir);
      break;
    case Experiment::bf_identity:
      pass = run_bf_identity(resolved, dir);
      break;
    case Experiment::transport:
      pass = run_transport(resolved, dir);
      break;
    case Experiment::mean_verify:
      pass = run_mean_verify(resolved, dir);
      break;
    case Experiment::uniqueness:
      pass = run_uniqueness(resolved, dir);
      break;
    case Experiment::energy:
      pass = run_energy(resolved, dir);
      break;
    case Experiment::gronwall:
      pass = run_gronwall(resolved, dir);
      break;
    case Experiment::weak_form:
      pass = run_weak_form(resolved, dir);
      break;
    case Experiment::muskat:
      pass = run_muskat(resolved, dir);
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();

  ManifestEntry entry;
  entry.scenario = s.name;
  entry.experiment = experiment_name(s.experiment);
  entry.config_hash = fnv1a64(scenario_canonical(resolved));
  entry.master_seed = s.master_seed;
  entry.version = version_string();
  entry.wallclock_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  entry.threads = thread_count();
  entry.status = pass ? "pass" : "fail";
  write_manifest(dir, entry);

  return pass ? 0 : 2;
}

}  // namespace slt
