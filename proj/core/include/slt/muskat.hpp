#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slt/drift.hpp"
#include "slt/grid.hpp"

namespace slt {

// MAC-staggered velocity on an n x n cell grid: u on vertical faces
// ((n+1) x n), v on horizontal faces (n x (n+1)). Normal boundary faces are
// identically zero (discrete no-flux).
struct StaggeredVelocity {
  int n = 0;
  double extent = 1.0;
  std::vector<double> u;  // (n+1)*n, index j*(n+1)+i
  std::vector<double> v;  // n*(n+1), index j*n+i

  double& u_at(int i, int j) { return u[static_cast<std::size_t>(j) * (n + 1) + i]; }
  double u_at(int i, int j) const { return u[static_cast<std::size_t>(j) * (n + 1) + i]; }
  double& v_at(int i, int j) { return v[static_cast<std::size_t>(j) * n + i]; }
  double v_at(int i, int j) const { return v[static_cast<std::size_t>(j) * n + i]; }

  double max_boundary_normal() const;
  double max_abs() const;

  /// Cell-centered average used as transport drift.
  VectorField to_cell_field(const GridSpec& g) const;
};

struct DarcyResult {
  StaggeredVelocity velocity;
  ScalarField pressure;   // mean-zero gauge
  double max_div = 0.0;   // staggered divergence sup (== final CG residual)
  int iterations = 0;
};

/// Solves H v = -grad p + G, div v = 0, v.n = 0 with face transmissibility
/// 2/(H_left + H_right) and conjugate gradients on the 5-point stencil.
/// Throws ConditionError for near-singular H and EllipticError when the
/// iteration stalls.
DarcyResult darcy_solve(const ScalarField& mobility_mean, const VectorField& body_force,
                        double tol = 1e-10, int max_iters = 0);

enum class MobilityLaw { constant, affine };  // h(m) = h0   or   h0 + m

struct MuskatConfig {
  GridSpec grid;  // dim 2, boundary box
  double sigma = 0.05;
  MobilityLaw mobility = MobilityLaw::affine;
  double h0 = 1.0;
  std::array<double, 2> gravity{0.0, -1.0};
  ScalarField rho0, nu0;
  double horizon = 0.5;
  int mesh_times = 20;  // transport steps; Darcy slices at 0..mesh_times
  int n_paths = 200;
  int max_iterations = 30;
  double fp_tolerance = 0.0;  // 0: auto = 1e-3 * |rho0|_{L2(Omega x [0,T] x U)}
  double damping = 1.0;       // velocity relaxation factor (1 = none)
  std::uint64_t master_seed = 7;

  double phase_lo = 0.0, phase_hi = 0.0;  // recorded [M_lo, M_hi] bounds

  double mobility_value(double m) const {
    return mobility == MobilityLaw::constant ? h0 : h0 + m;
  }
  void validate();
};

/// MC average of h(t, x, rho*nu) over the supplied per-path phase slices.
/// Throws ConfigError if the result dips below h0.
ScalarField mobility_expectation(const MuskatConfig& config,
                                 const std::vector<ScalarField>& rho_paths,
                                 const std::vector<ScalarField>& nu_paths);

struct MuskatIterationStats {
  int k = 0;
  double change = 0.0;      // |(rho,nu)^k - (rho,nu)^{k-1}| in L2(Omega x [0,T] x U)
  double max_div_v = 0.0;   // worst staggered divergence across slices
  double min_mobility = 0.0;
  double max_boundary_normal = 0.0;
  double phase_min = 0.0, phase_max = 0.0;  // over paths, times, cells
};

struct MuskatResult {
  std::vector<MuskatIterationStats> iterations;
  bool converged = false;
  bool non_contractive = false;
  double fp_tolerance = 0.0;
  ScalarField mean_rho_final;  // E[rho](T, .) after the last iteration
  ScalarField mean_nu_final;
};

/// Picard iteration: expectation coefficients -> Darcy -> per-path
/// transport, repeated until the phase change drops below tolerance or the
/// iteration budget runs out. Reports convergence, never assumes it.
MuskatResult fixed_point_iterate(const MuskatConfig& config);

/// Two-layer initial datum with a smoothed, sinusoidally perturbed
/// interface (heavy value on top of the interface when top > bottom).
ScalarField layered_field(const GridSpec& g, double bottom, double top,
                          double interface_y, double perturb_amplitude,
                          int perturb_mode, double interface_width);

/// The desk-scale preset: 64^2 box, sigma 0.05, affine mobility, perturbed
/// two-layer phases, 200 paths, 20 mesh times.
MuskatConfig desk64_preset(std::uint64_t master_seed = 7);

}  // namespace slt
