#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "slt/brownian.hpp"
#include "slt/drift.hpp"
#include "slt/grid.hpp"

namespace slt {

// Image of every grid node under the flow (or inverse flow) of
//   dX = b(t, X) dt + sigma dB,
// integrated with Euler-Maruyama on the path mesh. Positions are kept
// unwrapped on periodic grids (interpolation wraps them); box grids
// reflect the characteristics at the walls after every step.
struct FlowField {
  GridSpec grid;
  double t = 0.0;
  std::array<std::vector<double>, 3> positions;
  std::uint64_t path_seed = 0;
  std::uint64_t path_index = 0;
};

struct JacobianField {
  GridSpec grid;
  double t = 0.0;
  std::vector<double> log_jacobian;
};

/// X_t started from every grid node, shared increments across nodes.
/// Throws BlowupError if any position exceeds 10 * extent and MeshError for
/// off-mesh t. The drift must be a sampled (regularized) field.
FlowField forward_flow(const SampledDrift& b, const BrownianPath& path,
                       double t, double noise_amplitude = 1.0);

/// Backward recursion with the same increments; first-order inverse of the
/// forward Euler map.
FlowField inverse_flow(const SampledDrift& b, const BrownianPath& path,
                       double t, double noise_amplitude = 1.0);

/// Evaluates the forward (or backward) map at arbitrary starting points.
void flow_points(const SampledDrift& b, const BrownianPath& path, double t,
                 double noise_amplitude, bool backward,
                 std::vector<std::array<double, 3>>& points);

/// u(t, x) = u0(inverse flow of x); multilinear interpolation keeps the
/// output inside [min u0, max u0].
ScalarField transport_solve(const ScalarField& u0, const SampledDrift& b,
                            const BrownianPath& path, double t,
                            double noise_amplitude = 1.0);

/// Left-endpoint quadrature of div b along the forward trajectories.
JacobianField jacobian_log(const SampledDrift& b, const BrownianPath& path,
                           double t);

struct L2BoundReport {
  double lhs_sq = 0.0;     // int u(t)^2
  double rhs_sq = 0.0;     // int u0^2
  double growth = 1.0;     // exp( int_0^t sup|div b| )
  double slack = 0.05;
  bool pass = false;
};

L2BoundReport l2_bound_check(const ScalarField& u0, const SampledDrift& b,
                             const BrownianPath& path, double t);

}  // namespace slt
