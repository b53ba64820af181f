#pragma once

#include <cstdint>
#include <vector>

#include "slt/errors.hpp"

namespace slt {

// One d-dimensional Brownian trajectory stored as increments on a uniform
// mesh of [0, T]. Regenerating with the same (master_seed, path_index)
// reproduces the increments bit for bit; all grid nodes of an experiment
// share the same path.
struct BrownianPath {
  int dim = 1;
  double horizon = 1.0;
  int steps = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
  std::vector<double> increments;  // steps*dim, increment k component a at [k*dim+a]

  double dt() const { return horizon / steps; }
  double increment(int k, int a) const { return increments[static_cast<std::size_t>(k) * dim + a]; }

  /// B at mesh time index k (sequential partial sum of the increments).
  void value_at(int k, double* out) const;

  static BrownianPath sample(std::uint64_t master_seed, std::uint64_t path_index,
                             int dim, double horizon, int steps);
  static BrownianPath zeros(int dim, double horizon, int steps);
};

/// Single-path convenience used by the catalog examples (path index 0).
BrownianPath sample_path(std::uint64_t seed, int dim, double horizon, int steps);

/// Index of mesh time t on this path; throws MeshError when t is off-mesh.
int mesh_index(const BrownianPath& path, double t);

}  // namespace slt
