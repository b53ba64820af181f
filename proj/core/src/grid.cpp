#include "slt/grid.hpp"

#include <algorithm>
#include <cmath>

namespace slt {

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw DomainError("grid dim must be 1, 2 or 3");
  if (n < 4) throw DomainError("grid needs at least 4 points per axis");
  if (!(extent > 0.0)) throw DomainError("grid extent must be positive");
  if (!(spacing() > 0.0)) throw DomainError("grid spacing must be positive");
}

void ScalarField::check_finite(const char* what) const {
  for (double v : values)
    if (!std::isfinite(v)) throw CatalogError(std::string(what) + ": non-finite value");
}

void VectorField::check_finite(const char* what) const {
  for (int a = 0; a < grid.dim; ++a)
    for (double v : comps[a])
      if (!std::isfinite(v)) throw CatalogError(std::string(what) + ": non-finite value");
}

double continuous_index(const GridSpec& g, double x) {
  const double dx = g.spacing();
  const double L = g.extent;
  if (g.boundary == Boundary::periodic) {
    double s = (x + L) / dx;
    const double n = static_cast<double>(g.n);
    s = std::fmod(s, n);
    if (s < 0.0) s += n;
    if (s >= n) s = 0.0;  // fmod can land exactly on n after the += above
    return s;
  }
  // Reflect into [-L, L] (period 4L), then map to the cell-center axis.
  double y = std::fmod(x + L, 4.0 * L);
  if (y < 0.0) y += 4.0 * L;
  if (y > 2.0 * L) y = 4.0 * L - y;
  double s = y / dx - 0.5;
  return std::clamp(s, 0.0, static_cast<double>(g.n - 1));
}

namespace {

struct Corner {
  std::size_t base_lo, base_hi;
  double w_hi;
};

// Per-axis interpolation data.
inline void axis_weights(const GridSpec& g, double x, int& i0, int& i1,
                         double& w) {
  const double s = continuous_index(g, x);
  const int n = g.n;
  i0 = static_cast<int>(std::floor(s));
  if (i0 > n - 1) i0 = n - 1;
  w = s - i0;
  if (g.boundary == Boundary::periodic) {
    if (i0 >= n) i0 -= n;
    i1 = i0 + 1 == n ? 0 : i0 + 1;
  } else {
    i1 = std::min(i0 + 1, n - 1);
  }
}

inline double sample_values(const GridSpec& g, const std::vector<double>& v,
                            const double* x) {
  int i0[3], i1[3];
  double w[3];
  for (int a = 0; a < g.dim; ++a) axis_weights(g, x[a], i0[a], i1[a], w[a]);
  const std::size_t n = static_cast<std::size_t>(g.n);
  switch (g.dim) {
    case 1:
      return (1.0 - w[0]) * v[i0[0]] + w[0] * v[i1[0]];
    case 2: {
      const std::size_t r0 = static_cast<std::size_t>(i0[1]) * n;
      const std::size_t r1 = static_cast<std::size_t>(i1[1]) * n;
      const double f0 = (1.0 - w[0]) * v[r0 + i0[0]] + w[0] * v[r0 + i1[0]];
      const double f1 = (1.0 - w[0]) * v[r1 + i0[0]] + w[0] * v[r1 + i1[0]];
      return (1.0 - w[1]) * f0 + w[1] * f1;
    }
    default: {
      double acc = 0.0;
      for (int cz = 0; cz < 2; ++cz) {
        const int iz = cz ? i1[2] : i0[2];
        const double wz = cz ? w[2] : 1.0 - w[2];
        for (int cy = 0; cy < 2; ++cy) {
          const int iy = cy ? i1[1] : i0[1];
          const double wy = cy ? w[1] : 1.0 - w[1];
          const std::size_t row = (static_cast<std::size_t>(iz) * n + iy) * n;
          acc += wz * wy *
                 ((1.0 - w[0]) * v[row + i0[0]] + w[0] * v[row + i1[0]]);
        }
      }
      return acc;
    }
  }
}

}  // namespace

double sample(const ScalarField& f, const double* x) {
  return sample_values(f.grid, f.values, x);
}

void sample(const VectorField& f, const double* x, double* out) {
  for (int a = 0; a < f.grid.dim; ++a)
    out[a] = sample_values(f.grid, f.comps[a], x);
}

double field_norm(const ScalarField& f, NormKind kind, double ball_radius) {
  const GridSpec& g = f.grid;
  const double w = g.cell_volume();
  switch (kind) {
    case NormKind::Linf: {
      double m = 0.0;
      for (double v : f.values) m = std::max(m, std::fabs(v));
      return m;
    }
    case NormKind::L2: {
      double s = 0.0;
      for (double v : f.values) s += v * v;
      return std::sqrt(s * w);
    }
    case NormKind::L1Ball: {
      if (ball_radius > g.extent)
        throw DomainError("L1 ball radius exceeds the box half-width");
      double s = 0.0;
      double x[3];
      for (std::size_t i = 0; i < f.values.size(); ++i) {
        g.node_position(i, x);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        if (r2 <= ball_radius * ball_radius) s += std::fabs(f.values[i]);
      }
      return s * w;
    }
  }
  return 0.0;
}

double l2_norm(const ScalarField& f) { return field_norm(f, NormKind::L2); }

double l2_inner(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.cell_volume();
}

namespace {

// Strides and wrapped neighbor index along one axis of a periodic grid.
inline std::size_t wrap_shift(std::size_t idx, int a, int delta, int n,
                              const std::size_t* stride) {
  const int coord = static_cast<int>((idx / stride[a]) % n);
  int c = coord + delta;
  if (c < 0) c += n;
  if (c >= n) c -= n;
  return idx + (static_cast<std::size_t>(c) - coord) * stride[a];
}

inline void make_strides(const GridSpec& g, std::size_t* stride) {
  stride[0] = 1;
  for (int a = 1; a < g.dim; ++a)
    stride[a] = stride[a - 1] * static_cast<std::size_t>(g.n);
}

}  // namespace

ScalarField divergence_centered(const VectorField& v) {
  const GridSpec& g = v.grid;
  ScalarField out(g);
  std::size_t stride[3];
  make_strides(g, stride);
  const double inv2dx = 1.0 / (2.0 * g.spacing());
  const std::size_t total = g.node_count();
  for (std::size_t i = 0; i < total; ++i) {
    double d = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t ip = wrap_shift(i, a, +1, g.n, stride);
      const std::size_t im = wrap_shift(i, a, -1, g.n, stride);
      d += (v.comps[a][ip] - v.comps[a][im]) * inv2dx;
    }
    out.values[i] = d;
  }
  return out;
}

VectorField gradient_centered(const ScalarField& f) {
  const GridSpec& g = f.grid;
  VectorField out(g);
  std::size_t stride[3];
  make_strides(g, stride);
  const double inv2dx = 1.0 / (2.0 * g.spacing());
  const std::size_t total = g.node_count();
  for (std::size_t i = 0; i < total; ++i) {
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t ip = wrap_shift(i, a, +1, g.n, stride);
      const std::size_t im = wrap_shift(i, a, -1, g.n, stride);
      out.comps[a][i] = (f.values[ip] - f.values[im]) * inv2dx;
    }
  }
  return out;
}

double dirichlet_energy_forward(const ScalarField& f) {
  const GridSpec& g = f.grid;
  std::size_t stride[3];
  make_strides(g, stride);
  const double invdx2 = 1.0 / (g.spacing() * g.spacing());
  const std::size_t total = g.node_count();
  double s = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t ip = wrap_shift(i, a, +1, g.n, stride);
      const double d = f.values[ip] - f.values[i];
      s += d * d * invdx2;
    }
  }
  return s * g.cell_volume();
}

double dirichlet_energy_centered(const ScalarField& f) {
  const GridSpec& g = f.grid;
  std::size_t stride[3];
  make_strides(g, stride);
  const double inv2dx = 1.0 / (2.0 * g.spacing());
  const std::size_t total = g.node_count();
  double s = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t ip = wrap_shift(i, a, +1, g.n, stride);
      const std::size_t im = wrap_shift(i, a, -1, g.n, stride);
      const double d = (f.values[ip] - f.values[im]) * inv2dx;
      s += d * d;
    }
  }
  return s * g.cell_volume();
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace slt
