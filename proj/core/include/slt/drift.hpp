#pragma once

#include <array>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "slt/grid.hpp"

namespace slt {

enum class DriftKind { zero, constant, linear, rotation, shear, cellular, tabulated };

struct SampledDrift;

// A drift b(t, x) from the catalog, with its declared divergence and the
// hypothesis flags used by the validation report:
//   con1  - locally square integrable (every catalog entry, by construction)
//   con2  - divergence bounded in space, integrable in time
//   con3  - sublinear growth outside the ball of radius growth_radius
struct DriftSpec {
  DriftKind kind = DriftKind::zero;
  int dim = 2;

  std::array<double, 3> constant{};               // kind == constant
  std::array<std::array<double, 3>, 3> matrix{};  // kind == linear
  double shear_rate = 1.0;                        // kind == shear
  int cells = 4;                                  // kind == cellular
  double extent = 1.0;                            // cellular tiling half-width
  double growth_radius = 0.0;                     // con3 radius (0 = global bound)
  std::shared_ptr<const SampledDrift> table;      // kind == tabulated

  std::string name;

  /// b(t, x). Wraps x into the tile for cellular drifts; evaluates the raw
  /// formula elsewhere. Throws DomainError for t outside the declared
  /// horizon and CatalogError on non-finite results.
  std::array<double, 3> eval(double t, const double* x) const;

  bool divergence_is_analytic() const;
  /// Spatially constant analytic divergence (0 or trace of the matrix).
  double analytic_divergence() const;

  double time_horizon() const;  // +inf for autonomous entries
  void validate() const;
};

/// Named catalog entries: zero, constant, linear, rotation, shear, cellular.
/// `extent` fixes the cellular tiling; ignored by the other kinds.
DriftSpec drift_catalog(const std::string& name, int dim, double extent = 1.0);
std::vector<std::string> drift_catalog_names(int dim);

/// Stream function of the cellular drift (b = perp-gradient of it); exposed
/// so tests can difference it directly.
double cellular_stream(const DriftSpec& spec, double x, double y);

/// Samples b(t, .) on the grid (no smoothing).
VectorField sample_drift(const DriftSpec& spec, double t, const GridSpec& g);

struct DivergenceField {
  ScalarField field;
  double sup_norm = 0.0;  // grid sup of |div b(t, .)|
};

/// Analytic divergence when declared, otherwise centered differences of the
/// sampled field.
DivergenceField drift_divergence(const DriftSpec& spec, double t,
                                 const GridSpec& g);

struct HypothesisReport {
  bool con1 = true;
  bool con2 = false;
  double div_sup_integral = 0.0;  // left-endpoint sum over the time mesh
  bool con3_declared = false;
  double growth_radius = 0.0;
};

/// Evaluates the divergence bound over the given time mesh.
HypothesisReport validate_hypotheses(const DriftSpec& spec, const GridSpec& g,
                                     const std::vector<double>& times);

// ---------------------------------------------------------------------------
// A drift realized on a grid: one slice per mesh time (a single slice for
// autonomous drifts), each with its divergence field and sup norm. This is
// what the characteristics integrator and the parabolic solver consume.
struct SampledDrift {
  GridSpec grid;
  double t0 = 0.0;
  double slice_dt = 0.0;  // 0 for a single static slice
  std::vector<VectorField> slices;
  std::vector<ScalarField> divs;
  std::vector<double> div_sup;
  bool zero_drift = false;  // exact zero field: integrators may skip evaluation

  bool is_static() const { return slices.size() == 1; }
  int slice_index(double t) const;
  const VectorField& at_time(double t) const { return slices[slice_index(t)]; }
  const ScalarField& div_at_time(double t) const { return divs[slice_index(t)]; }

  /// Left-endpoint quadrature of sup |div| over [0, t].
  double div_sup_integral(double t) const;

  /// Componentwise max magnitude over all slices.
  double max_component() const;
};

/// Raw (unsmoothed) sampling of a catalog drift onto a grid; static slice
/// for autonomous kinds.
SampledDrift make_sampled_drift(const DriftSpec& spec, const GridSpec& g,
                                const std::vector<double>& times = {});

}  // namespace slt
