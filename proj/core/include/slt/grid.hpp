#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "slt/errors.hpp"

namespace slt {

enum class Boundary { periodic, box };

// Uniform grid on the box [-L, L]^dim with n points per axis.
//
// Node layout depends on the boundary handling:
//   periodic: nodes at -L + i*dx, i = 0..n-1 (index n is identified with 0)
//   box:      cell centers at -L + (i+0.5)*dx, i = 0..n-1
struct GridSpec {
  int dim = 2;
  double extent = 1.0;  // half-width L
  int n = 64;
  Boundary boundary = Boundary::periodic;

  double spacing() const { return 2.0 * extent / n; }

  std::size_t node_count() const {
    std::size_t c = 1;
    for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n);
    return c;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing();
    return v;
  }

  double coord(int i) const {
    return boundary == Boundary::periodic ? -extent + i * spacing()
                                          : -extent + (i + 0.5) * spacing();
  }

  /// Coordinates of the flattened node index (x fastest).
  void node_position(std::size_t idx, double* out) const {
    for (int a = 0; a < dim; ++a) {
      out[a] = coord(static_cast<int>(idx % n));
      idx /= n;
    }
  }

  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;
  std::optional<double> time_tag;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid(g), values(g.node_count(), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  /// Throws CatalogError if any value is non-finite.
  void check_finite(const char* what = "scalar field") const;
};

struct VectorField {
  GridSpec grid;
  std::array<std::vector<double>, 3> comps;  // comps[a] used for a < dim

  VectorField() = default;
  explicit VectorField(const GridSpec& g) : grid(g) {
    for (int a = 0; a < g.dim; ++a) comps[a].assign(g.node_count(), 0.0);
  }

  std::vector<double>& comp(int a) { return comps[a]; }
  const std::vector<double>& comp(int a) const { return comps[a]; }

  void check_finite(const char* what = "vector field") const;
};

// ---------------------------------------------------------------------------
// Sampling (multilinear interpolation). Periodic grids wrap; box grids
// reflect into [-L, L] and then clamp to the cell-center range, so sampled
// values are always convex combinations of stored values.

/// Map x onto the continuous index axis for this grid, handling wrap or
/// reflection. Returned value lies in [0, n) (periodic) or [0, n-1] (box).
double continuous_index(const GridSpec& g, double x);

double sample(const ScalarField& f, const double* x);
void sample(const VectorField& f, const double* x, double* out);

// ---------------------------------------------------------------------------
// Norms. Riemann-sum quadrature with cell weight dx^dim.

enum class NormKind { L2, Linf, L1Ball };

/// L2 / Linf / L1 over the ball |x| <= ball_radius. Throws DomainError if
/// the ball does not fit in the box.
double field_norm(const ScalarField& f, NormKind kind, double ball_radius = 0.0);

double l2_norm(const ScalarField& f);
double l2_inner(const ScalarField& a, const ScalarField& b);

// ---------------------------------------------------------------------------
// Discrete operators on periodic grids (centered, second order).

ScalarField divergence_centered(const VectorField& v);
VectorField gradient_centered(const ScalarField& f);

/// Sum over axes of the forward-difference squared gradient, times dx^dim.
/// This is the dissipation functional that pairs exactly with the 3-point
/// Laplacian on a periodic grid.
double dirichlet_energy_forward(const ScalarField& f);

/// Same with the centered stencil (used for H1-type diagnostics).
double dirichlet_energy_centered(const ScalarField& f);

double max_abs(const std::vector<double>& v);

}  // namespace slt
