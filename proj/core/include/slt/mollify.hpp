#pragma once

#include <vector>

#include "slt/drift.hpp"
#include "slt/grid.hpp"

namespace slt {

enum class KernelKind { bump, gaussian_truncated };

// Symmetric smoothing kernel of support radius epsilon plus the expanding
// cutoff eta(cutoff_epsilon * x), which equals 1 on |x| <= 1/cutoff_epsilon.
struct MollifierSpec {
  double epsilon = 0.1;
  KernelKind kernel = KernelKind::bump;
  double cutoff_epsilon = 0.0;  // 0: use epsilon

  double cutoff_scale() const { return cutoff_epsilon > 0.0 ? cutoff_epsilon : epsilon; }
};

// Kernel sampled on grid offsets, normalized so the discrete mass is
// exactly 1 (sum of weights times dx^dim).
struct DiscreteKernel {
  int radius = 0;                // offsets in [-radius, radius] per axis
  int dim = 2;
  std::vector<double> weights;   // (2*radius+1)^dim, x fastest
  double mass_times_cell = 0.0;  // should be 1 after normalization

  double weight(const int* offset) const;
};

/// Builds the kernel for this grid. Throws ResolutionError if epsilon < 2*dx
/// and DomainError if the support exceeds a quarter of the box.
DiscreteKernel build_kernel(const MollifierSpec& m, const GridSpec& g);

/// Smooth radial cutoff: 1 on r <= 1, 0 on r >= 2, quintic in between.
double cutoff_eta(double r);

/// Discrete convolution with the kernel, then pointwise cutoff.
ScalarField regularize_scalar(const ScalarField& f, const MollifierSpec& m);

struct RegularizedDrift {
  VectorField field;
  ScalarField divergence;  // centered differences of the smoothed field
  double div_sup = 0.0;
};

/// Componentwise regularization of a catalog drift at time t.
RegularizedDrift regularize_drift(const DriftSpec& b, double t,
                                  const MollifierSpec& m, const GridSpec& g);

/// Full mollified drift ready for the characteristics and parabolic solvers.
SampledDrift make_mollified_drift(const DriftSpec& b, const GridSpec& g,
                                  const MollifierSpec& m,
                                  const std::vector<double>& times = {});

/// R(f, g) = (f . grad)(rho * g) - rho * (f . grad g), with the same
/// centered-difference gradient in both terms.
ScalarField commutator(const VectorField& f, const ScalarField& g,
                       const MollifierSpec& m);

struct CommutatorRow {
  double epsilon;
  double l1_norm_ball;
};

struct CommutatorStudy {
  std::vector<CommutatorRow> rows;
  bool decayed = false;         // last value does not exceed the first
  bool hypothesis_ok = false;   // g looks like a discrete H1 function
};

/// Decay table of the commutator over a strictly decreasing epsilon ladder.
/// Throws ConfigError for a non-decreasing ladder, ResolutionError if any
/// epsilon is under-resolved.
CommutatorStudy commutator_study(const DriftSpec& f, const ScalarField& g,
                                 const std::vector<double>& eps_sequence,
                                 double ball_radius);

/// Two-scale detector used by the study: compares the centered Dirichlet
/// energy on the full grid with the energy of the half-resolution
/// subsample. Rough (indicator-like) data roughly doubles the energy under
/// refinement; H1-like data keeps it stable.
bool looks_like_h1(const ScalarField& g);

}  // namespace slt
