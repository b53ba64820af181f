#pragma once

#include <vector>

#include "slt/drift.hpp"
#include "slt/exponential.hpp"
#include "slt/grid.hpp"

namespace slt {

// Explicit solver for the shifted advection-diffusion family
//   dV/dt + (b(t,x) + h(t)) . grad V = 1/2 Laplace V
// on a periodic grid: first-order upwind advection, centered diffusion,
// CFL factor 0.4. Used as the deterministic oracle for the mean field.
struct ParabolicRun {
  GridSpec grid;
  ExponentialSpec shift;
  double dt = 0.0;
  int steps = 0;

  std::vector<double> output_times;  // snapped to the step mesh
  std::vector<int> output_steps;
  std::vector<ScalarField> outputs;

  // Per-step diagnostics (index m = 0..steps, left-endpoint quadratures).
  std::vector<double> energy;           // int V^2 at t_m
  std::vector<double> dissipation_cum;  // int_0^{t_m} int |grad V|^2 (forward diff)
  std::vector<double> divb_term_cum;    // int_0^{t_m} int div b V^2
  std::vector<double> gamma_cum;        // int_0^{t_m} sup|div b(s,.)| ds
  std::vector<double> mass;             // int V at t_m

  double initial_energy = 0.0;
  double min_initial = 0.0, max_initial = 0.0;
  double max_principle_excess = 0.0;  // worst overshoot beyond [min V0, max V0]
};

/// Throws StepSizeError when the CFL bound degenerates.
ParabolicRun parabolic_solve(const ScalarField& V0, const SampledDrift& drift,
                             const ExponentialSpec& h, double horizon,
                             const std::vector<double>& output_times);

struct EnergyRow {
  double t;
  double energy;            // int V^2
  double dissipation;       // int_0^t int |grad V|^2
  double balance_residual;  // energy + dissipation - int V0^2 - int div b V^2
};

std::vector<EnergyRow> energy_series(const ParabolicRun& run);

struct GronwallRow {
  double t;
  double lhs;     // int V^2(t)
  double bound;   // exp(int_0^t gamma) * int V0^2 * (1 + slack)
  bool pass;
};

struct GronwallReport {
  std::vector<GronwallRow> rows;
  double gradient_lhs = 0.0;    // int_0^T int |grad V|^2
  double gradient_bound = 0.0;  // (1 + int gamma e^{int gamma}) int V0^2 * (1+slack)
  bool gradient_pass = false;
  bool pass = false;
  double slack = 0.05;
};

GronwallReport gronwall_check(const ParabolicRun& run);

}  // namespace slt
