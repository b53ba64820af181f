#include "slt/flow.hpp"

#include <algorithm>
#include <cmath>

namespace slt {

namespace {

inline void wrap_axis(double s, int n, int& i0, int& i1, double& w) {
  const double fs = std::floor(s);
  long i = static_cast<long>(fs);
  w = s - fs;
  i %= n;
  if (i < 0) i += n;
  i0 = static_cast<int>(i);
  i1 = i0 + 1 == n ? 0 : i0 + 1;
}

// Bilinear gather on one periodic 2D slice; index weights are computed once
// and reused for every component sampled at the same point.
struct Stencil2 {
  std::size_t c00, c10, c01, c11;
  double w00, w10, w01, w11;

  inline void locate(double x, double y, double L, double invdx, int n) {
    int i0, i1, j0, j1;
    double wx, wy;
    wrap_axis((x + L) * invdx, n, i0, i1, wx);
    wrap_axis((y + L) * invdx, n, j0, j1, wy);
    const std::size_t r0 = static_cast<std::size_t>(j0) * n;
    const std::size_t r1 = static_cast<std::size_t>(j1) * n;
    c00 = r0 + i0;
    c10 = r0 + i1;
    c01 = r1 + i0;
    c11 = r1 + i1;
    w00 = (1.0 - wx) * (1.0 - wy);
    w10 = wx * (1.0 - wy);
    w01 = (1.0 - wx) * wy;
    w11 = wx * wy;
  }

  inline double gather(const double* v) const {
    return w00 * v[c00] + w10 * v[c10] + w01 * v[c01] + w11 * v[c11];
  }
};

inline double reflect_into(double x, double L) {
  if (x >= -L && x <= L) return x;
  const double period = 4.0 * L;
  double y = std::fmod(x + L, period);
  if (y < 0.0) y += period;
  if (y > 2.0 * L) y = period - y;
  return y - L;
}

struct StepPlan {
  int k_t;            // number of Euler steps
  double dt;
  double limit;       // blow-up threshold (10 L)
};

StepPlan make_plan(const SampledDrift& b, const BrownianPath& path, double t) {
  if (b.grid.dim != path.dim)
    throw MeshError("drift grid and Brownian path disagree on dim");
  StepPlan p;
  p.k_t = mesh_index(path, t);
  p.dt = path.dt();
  p.limit = 10.0 * b.grid.extent;
  return p;
}

// One Euler-Maruyama sweep over all points for either direction. logj, when
// given, accumulates the left-endpoint quadrature of div b along the
// forward trajectory.
void integrate(const SampledDrift& b, const BrownianPath& path, double t,
               double sigma, bool backward,
               std::array<std::vector<double>, 3>& pos, double* logj) {
  const StepPlan plan = make_plan(b, path, t);
  const GridSpec& g = b.grid;
  const int dim = g.dim;
  const std::size_t count = pos[0].size();
  const bool reflecting = g.boundary == Boundary::box;
  const double L = g.extent;
  const double invdx = 1.0 / g.spacing();
  const int n = g.n;

  for (int s = 0; s < plan.k_t; ++s) {
    const int k = backward ? plan.k_t - 1 - s : s;
    // Forward steps use b(t_k, .), the backward recursion b(t_{k+1}, .).
    const double t_eval = (backward ? (k + 1) : k) * plan.dt;
    const double sgn = backward ? -1.0 : 1.0;
    const VectorField* slice = b.zero_drift ? nullptr : &b.at_time(t_eval);
    const ScalarField* div_slice =
        (logj && !b.zero_drift) ? &b.div_at_time(k * plan.dt) : nullptr;

    if (dim == 2) {
      const double ix = sgn * sigma * path.increment(k, 0);
      const double iy = sgn * sigma * path.increment(k, 1);
      double* px = pos[0].data();
      double* py = pos[1].data();
      const double* bx = slice ? slice->comps[0].data() : nullptr;
      const double* by = slice ? slice->comps[1].data() : nullptr;
      const double* dv = div_slice ? div_slice->values.data() : nullptr;
      Stencil2 st;
      for (std::size_t i = 0; i < count; ++i) {
        double x = px[i], y = py[i];
        if (slice) {
          st.locate(x, y, L, invdx, n);
          if (dv) logj[i] += st.gather(dv) * plan.dt;
          x += sgn * st.gather(bx) * plan.dt;
          y += sgn * st.gather(by) * plan.dt;
        }
        x += ix;
        y += iy;
        if (reflecting) {
          x = reflect_into(x, L);
          y = reflect_into(y, L);
        } else if (std::fabs(x) > plan.limit || std::fabs(y) > plan.limit) {
          throw BlowupError("characteristic left the 10L safety box");
        }
        px[i] = x;
        py[i] = y;
      }
      continue;
    }

    // Generic 1D / 3D path.
    double inc[3], bv[3], x[3];
    for (int a = 0; a < dim; ++a) inc[a] = sgn * sigma * path.increment(k, a);
    for (std::size_t i = 0; i < count; ++i) {
      for (int a = 0; a < dim; ++a) x[a] = pos[a][i];
      if (slice) {
        if (logj && div_slice) logj[i] += sample(*div_slice, x) * plan.dt;
        sample(*slice, x, bv);
        for (int a = 0; a < dim; ++a) x[a] += sgn * bv[a] * plan.dt;
      }
      for (int a = 0; a < dim; ++a) {
        x[a] += inc[a];
        if (reflecting)
          x[a] = reflect_into(x[a], L);
        else if (std::fabs(x[a]) > plan.limit)
          throw BlowupError("characteristic left the 10L safety box");
        pos[a][i] = x[a];
      }
    }
  }
}

std::array<std::vector<double>, 3> node_positions(const GridSpec& g) {
  std::array<std::vector<double>, 3> pos;
  const std::size_t count = g.node_count();
  for (int a = 0; a < g.dim; ++a) pos[a].resize(count);
  double x[3];
  for (std::size_t i = 0; i < count; ++i) {
    g.node_position(i, x);
    for (int a = 0; a < g.dim; ++a) pos[a][i] = x[a];
  }
  return pos;
}

}  // namespace

FlowField forward_flow(const SampledDrift& b, const BrownianPath& path,
                       double t, double noise_amplitude) {
  FlowField f;
  f.grid = b.grid;
  f.t = t;
  f.path_seed = path.master_seed;
  f.path_index = path.path_index;
  f.positions = node_positions(b.grid);
  integrate(b, path, t, noise_amplitude, /*backward=*/false, f.positions, nullptr);
  return f;
}

FlowField inverse_flow(const SampledDrift& b, const BrownianPath& path,
                       double t, double noise_amplitude) {
  FlowField f;
  f.grid = b.grid;
  f.t = t;
  f.path_seed = path.master_seed;
  f.path_index = path.path_index;
  f.positions = node_positions(b.grid);
  integrate(b, path, t, noise_amplitude, /*backward=*/true, f.positions, nullptr);
  return f;
}

void flow_points(const SampledDrift& b, const BrownianPath& path, double t,
                 double noise_amplitude, bool backward,
                 std::vector<std::array<double, 3>>& points) {
  std::array<std::vector<double>, 3> pos;
  for (int a = 0; a < b.grid.dim; ++a) {
    pos[a].resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) pos[a][i] = points[i][a];
  }
  integrate(b, path, t, noise_amplitude, backward, pos, nullptr);
  for (int a = 0; a < b.grid.dim; ++a)
    for (std::size_t i = 0; i < points.size(); ++i) points[i][a] = pos[a][i];
}

ScalarField transport_solve(const ScalarField& u0, const SampledDrift& b,
                            const BrownianPath& path, double t,
                            double noise_amplitude) {
  if (!(u0.grid == b.grid)) throw MeshError("initial datum and drift grids differ");
  FlowField back = inverse_flow(b, path, t, noise_amplitude);
  ScalarField u(u0.grid);
  u.time_tag = t;
  const GridSpec& g = u0.grid;
  const std::size_t count = g.node_count();
  if (g.dim == 2 && g.boundary == Boundary::periodic) {
    const double L = g.extent;
    const double invdx = 1.0 / g.spacing();
    const double* v = u0.values.data();
    Stencil2 st;
    for (std::size_t i = 0; i < count; ++i) {
      st.locate(back.positions[0][i], back.positions[1][i], L, invdx, g.n);
      u.values[i] = st.gather(v);
    }
    return u;
  }
  double x[3];
  for (std::size_t i = 0; i < count; ++i) {
    for (int a = 0; a < g.dim; ++a) x[a] = back.positions[a][i];
    u.values[i] = sample(u0, x);
  }
  return u;
}

JacobianField jacobian_log(const SampledDrift& b, const BrownianPath& path,
                           double t) {
  JacobianField j;
  j.grid = b.grid;
  j.t = t;
  j.log_jacobian.assign(b.grid.node_count(), 0.0);
  auto pos = node_positions(b.grid);
  integrate(b, path, t, 1.0, /*backward=*/false, pos, j.log_jacobian.data());
  return j;
}

L2BoundReport l2_bound_check(const ScalarField& u0, const SampledDrift& b,
                             const BrownianPath& path, double t) {
  L2BoundReport rep;
  const ScalarField u = transport_solve(u0, b, path, t);
  const double w = u0.grid.cell_volume();
  double lhs = 0.0, rhs = 0.0;
  for (double v : u.values) lhs += v * v;
  for (double v : u0.values) rhs += v * v;
  rep.lhs_sq = lhs * w;
  rep.rhs_sq = rhs * w;
  rep.growth = std::exp(b.div_sup_integral(t));
  rep.pass = rep.lhs_sq <= rep.growth * rep.rhs_sq * (1.0 + rep.slack);
  return rep;
}

}  // namespace slt
