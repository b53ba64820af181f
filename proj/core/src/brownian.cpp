#include "slt/brownian.hpp"

#include <cmath>

#include "slt/rng.hpp"

namespace slt {

void BrownianPath::value_at(int k, double* out) const {
  for (int a = 0; a < dim; ++a) out[a] = 0.0;
  for (int j = 0; j < k; ++j)
    for (int a = 0; a < dim; ++a) out[a] += increments[static_cast<std::size_t>(j) * dim + a];
}

BrownianPath BrownianPath::sample(std::uint64_t master_seed,
                                  std::uint64_t path_index, int dim,
                                  double horizon, int steps) {
  if (steps < 1) throw DomainError("Brownian path needs at least one step");
  if (!(horizon > 0.0)) throw DomainError("Brownian horizon must be positive");
  if (dim < 1 || dim > 3) throw DomainError("Brownian dim must be 1..3");
  BrownianPath p;
  p.dim = dim;
  p.horizon = horizon;
  p.steps = steps;
  p.master_seed = master_seed;
  p.path_index = path_index;
  p.increments.resize(static_cast<std::size_t>(steps) * dim);
  const double sqdt = std::sqrt(horizon / steps);
  for (int k = 0; k < steps; ++k)
    for (int a = 0; a < dim; ++a)
      p.increments[static_cast<std::size_t>(k) * dim + a] =
          sqdt * CounterRng::gaussian(master_seed, path_index,
                                      static_cast<std::uint64_t>(k) * dim + a);
  return p;
}

BrownianPath BrownianPath::zeros(int dim, double horizon, int steps) {
  BrownianPath p;
  p.dim = dim;
  p.horizon = horizon;
  p.steps = steps;
  p.increments.assign(static_cast<std::size_t>(steps) * dim, 0.0);
  return p;
}

BrownianPath sample_path(std::uint64_t seed, int dim, double horizon, int steps) {
  return BrownianPath::sample(seed, 0, dim, horizon, steps);
}

int mesh_index(const BrownianPath& path, double t) {
  const double s = t / path.dt();
  const int k = static_cast<int>(std::lround(s));
  if (k < 0 || k > path.steps || std::fabs(s - k) > 1e-9)
    throw MeshError("time is not on the path mesh");
  return k;
}

}  // namespace slt
