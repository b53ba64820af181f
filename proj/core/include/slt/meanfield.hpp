#pragma once

#include <cstdint>
#include <vector>

#include "slt/drift.hpp"
#include "slt/exponential.hpp"
#include "slt/flow.hpp"
#include "slt/mollify.hpp"
#include "slt/parabolic.hpp"

namespace slt {

// Monte-Carlo estimate of the mean field V = E[u F]: per-path inverse-flow
// transport weighted by the terminal stochastic exponential of h.
struct MeanEstimate {
  GridSpec grid;
  double t = 0.0;
  ExponentialSpec shift;
  ScalarField mean;
  ScalarField std_error;
  int n_paths = 0;
  int failed_paths = 0;
  std::uint64_t master_seed = 0;
};

/// Shared-path estimate for several shifts at once (the transport solve per
/// path is reused across the whole family). Paths that throw are counted
/// and dropped; more than 1% failures raises RunError.
std::vector<MeanEstimate> estimate_mean_multi(
    const ScalarField& u0, const SampledDrift& b_eps,
    const std::vector<ExponentialSpec>& shifts, double t, int n_paths,
    int steps, std::uint64_t master_seed);

/// Catalog-drift convenience: regularizes the drift, then estimates.
MeanEstimate estimate_mean(const ScalarField& u0, const DriftSpec& drift,
                           const MollifierSpec& mollifier,
                           const ExponentialSpec& h, double t, int n_paths,
                           int steps, std::uint64_t master_seed);

struct MeanCompareReport {
  double rel_l2 = 0.0;        // |mean - oracle|_L2 / |oracle|_L2
  double pooled_se_rel = 0.0; // sqrt(sum SE^2 dx^d) / |oracle|_L2
  double frac_z_exceed = 0.0; // fraction of nodes with |z| > 3
  double threshold = 0.0;     // 3*pooled_se_rel + scheme_tol
  bool pass = false;
};

/// Nodewise z-scores and relative L2 distance against the deterministic
/// solver run (same grid, same regularized drift, same shift, same time).
MeanCompareReport compare_with_parabolic(const MeanEstimate& est,
                                         const ParabolicRun& run,
                                         double scheme_tol = 0.02);

// ---------------------------------------------------------------------------
// Sequence-independence experiment: the same Brownian paths transported
// under two distinct mollifier ladders must produce mean fields whose gap
// closes as the ladders refine.

struct UniquenessLevel {
  double eps_a = 0.0, eps_b = 0.0;
  double gap = 0.0;        // |V_A - V_B|_L2
  double pooled_se = 0.0;  // from per-path differences (shared seeds)
  double scale = 0.0;      // mean of |V_A|, |V_B|
};

struct UniquenessReport {
  std::string shift_name;
  std::vector<UniquenessLevel> levels;
  bool decreasing = false;   // within 10% slack
  bool final_small = false;  // gap <= 3 SE + 2 * (1% of scale)
  bool pass = false;
};

/// Throws ConfigError unless both ladders are strictly decreasing and of
/// equal length.
std::vector<UniquenessReport> uniqueness_experiment(
    const ScalarField& u0, const DriftSpec& drift,
    const std::vector<double>& ladder_a, KernelKind kernel_a,
    const std::vector<double>& ladder_b, KernelKind kernel_b,
    const std::vector<ExponentialSpec>& shifts, double t, int n_paths,
    int steps, std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// Weak-form residual of one path's transport trajectory against a smooth
// tensor-bump test function (Ito form: drift, divergence, Ito sum with left
// endpoints, and the half-Laplacian correction).

struct TestFunction {
  std::array<double, 3> center{};
  double radius = 1.0;

  double value(const GridSpec& g, const double* x) const;
  void gradient(const GridSpec& g, const double* x, double* out) const;
  double laplacian(const GridSpec& g, const double* x) const;
};

/// Three bump centers that fit strictly inside the box.
std::vector<TestFunction> test_function_catalog(const GridSpec& g);

struct WeakFormTerms {
  double lhs = 0.0;           // int u(t) phi
  double initial = 0.0;       // int u(0) phi
  double drift_term = 0.0;    // sum dt int u b . grad phi
  double div_term = 0.0;      // sum dt int u phi div b
  double ito_term = 0.0;      // sum (int u grad phi) . dB
  double laplace_term = 0.0;  // 1/2 sum dt int u lap phi
  double residual = 0.0;
};

/// u at every mesh time 0..k(t) for one path (k(t)+1 fields).
std::vector<ScalarField> transport_trajectory(const ScalarField& u0,
                                              const SampledDrift& b,
                                              const BrownianPath& path,
                                              double t);

/// Throws DomainError when the bump support touches the wrap seam.
WeakFormTerms weak_form_residual(const std::vector<ScalarField>& trajectory,
                                 const SampledDrift& b,
                                 const BrownianPath& path,
                                 const TestFunction& phi);

}  // namespace slt
