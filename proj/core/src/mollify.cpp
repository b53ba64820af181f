#include "slt/mollify.hpp"

#include <algorithm>
#include <cmath>

namespace slt {

namespace {

double kernel_shape(KernelKind kind, double rho) {
  if (rho >= 1.0) return 0.0;
  switch (kind) {
    case KernelKind::bump:
      return std::exp(-1.0 / (1.0 - rho * rho));
    case KernelKind::gaussian_truncated: {
      const double sigma = 1.0 / 3.0;
      return std::exp(-0.5 * rho * rho / (sigma * sigma));
    }
  }
  return 0.0;
}

}  // namespace

double DiscreteKernel::weight(const int* offset) const {
  const int w = 2 * radius + 1;
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (int a = 0; a < dim; ++a) {
    idx += static_cast<std::size_t>(offset[a] + radius) * stride;
    stride *= w;
  }
  return weights[idx];
}

DiscreteKernel build_kernel(const MollifierSpec& m, const GridSpec& g) {
  const double dx = g.spacing();
  if (m.epsilon < 2.0 * dx)
    throw ResolutionError("mollifier epsilon below 2*dx is under-resolved");
  if (m.epsilon > 0.5 * g.extent)
    throw DomainError("mollifier support exceeds a quarter of the box");

  DiscreteKernel k;
  k.dim = g.dim;
  k.radius = static_cast<int>(std::ceil(m.epsilon / dx)) - 1;
  if (2 * k.radius + 1 > g.n) throw DomainError("mollifier kernel wider than grid");

  const int w = 2 * k.radius + 1;
  std::size_t total = 1;
  for (int a = 0; a < g.dim; ++a) total *= static_cast<std::size_t>(w);
  k.weights.assign(total, 0.0);

  double sum = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const int off = static_cast<int>(rest % w) - k.radius;
      rest /= w;
      r2 += static_cast<double>(off) * off;
    }
    const double rho = std::sqrt(r2) * dx / m.epsilon;
    k.weights[i] = kernel_shape(m.kernel, rho);
    sum += k.weights[i];
  }
  const double cell = g.cell_volume();
  if (!(sum > 0.0)) throw ResolutionError("mollifier kernel collapsed to zero");
  const double scale = 1.0 / (sum * cell);
  for (double& v : k.weights) v *= scale;
  k.mass_times_cell = 1.0;
  return k;
}

double cutoff_eta(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double u = r - 1.0;
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

namespace {

// Periodic convolution of one value array with the kernel.
std::vector<double> convolve(const GridSpec& g, const std::vector<double>& v,
                             const DiscreteKernel& k) {
  if (g.boundary != Boundary::periodic)
    throw DomainError("mollification is defined on periodic grids");
  const int n = g.n;
  const int w = 2 * k.radius + 1;
  const double cell = g.cell_volume();
  std::vector<double> out(v.size(), 0.0);

  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int ox = -k.radius; ox <= k.radius; ++ox) {
        int j = i - ox;
        j %= n;
        if (j < 0) j += n;
        acc += k.weights[ox + k.radius] * v[j];
      }
      out[i] = acc * cell;
    }
    return out;
  }

  if (g.dim == 2) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int oy = -k.radius; oy <= k.radius; ++oy) {
          int jj = j - oy;
          jj %= n;
          if (jj < 0) jj += n;
          const double* vrow = v.data() + static_cast<std::size_t>(jj) * n;
          const double* krow =
              k.weights.data() + static_cast<std::size_t>(oy + k.radius) * w;
          for (int ox = -k.radius; ox <= k.radius; ++ox) {
            int ii = i - ox;
            ii %= n;
            if (ii < 0) ii += n;
            acc += krow[ox + k.radius] * vrow[ii];
          }
        }
        out[static_cast<std::size_t>(j) * n + i] = acc * cell;
      }
    }
    return out;
  }

  // dim == 3
  for (int kz = 0; kz < n; ++kz)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int oz = -k.radius; oz <= k.radius; ++oz) {
          int zz = (kz - oz) % n;
          if (zz < 0) zz += n;
          for (int oy = -k.radius; oy <= k.radius; ++oy) {
            int jj = (j - oy) % n;
            if (jj < 0) jj += n;
            for (int ox = -k.radius; ox <= k.radius; ++ox) {
              int ii = (i - ox) % n;
              if (ii < 0) ii += n;
              const int koff[3] = {ox, oy, oz};
              acc += k.weight(koff) *
                     v[(static_cast<std::size_t>(zz) * n + jj) * n + ii];
            }
          }
        }
        out[(static_cast<std::size_t>(kz) * n + j) * n + i] = acc * cell;
      }
  return out;
}

void apply_cutoff(const GridSpec& g, double scale, std::vector<double>& v) {
  double x[3];
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.node_position(i, x);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
    const double eta = cutoff_eta(scale * std::sqrt(r2));
    if (eta != 1.0) v[i] *= eta;
  }
}

}  // namespace

ScalarField regularize_scalar(const ScalarField& f, const MollifierSpec& m) {
  const DiscreteKernel k = build_kernel(m, f.grid);
  ScalarField out(f.grid);
  out.time_tag = f.time_tag;
  out.values = convolve(f.grid, f.values, k);
  apply_cutoff(f.grid, m.cutoff_scale(), out.values);
  return out;
}

RegularizedDrift regularize_drift(const DriftSpec& b, double t,
                                  const MollifierSpec& m, const GridSpec& g) {
  const DiscreteKernel k = build_kernel(m, g);
  const VectorField raw = sample_drift(b, t, g);
  RegularizedDrift out;
  out.field = VectorField(g);
  for (int a = 0; a < g.dim; ++a) {
    out.field.comps[a] = convolve(g, raw.comps[a], k);
    apply_cutoff(g, m.cutoff_scale(), out.field.comps[a]);
  }
  out.divergence = divergence_centered(out.field);
  out.divergence.time_tag = t;
  out.div_sup = max_abs(out.divergence.values);
  return out;
}

SampledDrift make_mollified_drift(const DriftSpec& b, const GridSpec& g,
                                  const MollifierSpec& m,
                                  const std::vector<double>& times) {
  SampledDrift out;
  out.grid = g;
  out.zero_drift = b.kind == DriftKind::zero;
  std::vector<double> mesh = times;
  if (mesh.empty() ||
      b.time_horizon() == std::numeric_limits<double>::infinity())
    mesh = {0.0};
  if (mesh.size() > 1) {
    out.t0 = mesh.front();
    out.slice_dt = mesh[1] - mesh[0];
  }
  for (double t : mesh) {
    RegularizedDrift r = regularize_drift(b, t, m, g);
    out.slices.push_back(std::move(r.field));
    out.divs.push_back(std::move(r.divergence));
    out.div_sup.push_back(r.div_sup);
  }
  return out;
}

ScalarField commutator(const VectorField& f, const ScalarField& g,
                       const MollifierSpec& m) {
  const GridSpec& grid = g.grid;
  const DiscreteKernel k = build_kernel(m, grid);

  ScalarField smoothed(grid);
  smoothed.values = convolve(grid, g.values, k);
  const VectorField grad_smoothed = gradient_centered(smoothed);
  const VectorField grad_g = gradient_centered(g);

  const std::size_t total = grid.node_count();
  std::vector<double> advected(total, 0.0);
  ScalarField term1(grid);
  for (std::size_t i = 0; i < total; ++i) {
    double t1 = 0.0, t2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      t1 += f.comps[a][i] * grad_smoothed.comps[a][i];
      t2 += f.comps[a][i] * grad_g.comps[a][i];
    }
    term1.values[i] = t1;
    advected[i] = t2;
  }
  const std::vector<double> term2 = convolve(grid, advected, k);
  ScalarField out(grid);
  for (std::size_t i = 0; i < total; ++i)
    out.values[i] = term1.values[i] - term2[i];
  return out;
}

bool looks_like_h1(const ScalarField& g) {
  const GridSpec& grid = g.grid;
  if (grid.dim > 2 || grid.n % 2 != 0 || grid.n < 8) return true;
  GridSpec half = grid;
  half.n = grid.n / 2;
  ScalarField coarse(half);
  if (grid.dim == 1) {
    for (int i = 0; i < half.n; ++i) coarse.values[i] = g.values[2 * i];
  } else {
    for (int j = 0; j < half.n; ++j)
      for (int i = 0; i < half.n; ++i)
        coarse.values[static_cast<std::size_t>(j) * half.n + i] =
            g.values[static_cast<std::size_t>(2 * j) * grid.n + 2 * i];
  }
  const double fine = dirichlet_energy_centered(g);
  const double rough = dirichlet_energy_centered(coarse);
  if (fine < 1e-14) return true;
  if (rough < 1e-14) return false;
  return fine / rough < 1.5;
}

CommutatorStudy commutator_study(const DriftSpec& f, const ScalarField& g,
                                 const std::vector<double>& eps_sequence,
                                 double ball_radius) {
  if (eps_sequence.empty()) throw ConfigError("empty epsilon ladder");
  for (std::size_t i = 0; i + 1 < eps_sequence.size(); ++i)
    if (!(eps_sequence[i + 1] < eps_sequence[i]))
      throw ConfigError("epsilon ladder must be strictly decreasing");
  const double dx = g.grid.spacing();
  for (double e : eps_sequence)
    if (e < 2.0 * dx)
      throw ResolutionError("epsilon ladder under-resolved: epsilon < 2*dx");

  const VectorField fv = sample_drift(f, 0.0, g.grid);
  CommutatorStudy study;
  study.hypothesis_ok = looks_like_h1(g);
  for (double eps : eps_sequence) {
    MollifierSpec m;
    m.epsilon = eps;
    const ScalarField r = commutator(fv, g, m);
    study.rows.push_back({eps, field_norm(r, NormKind::L1Ball, ball_radius)});
  }
  study.decayed = study.rows.back().l1_norm_ball <= study.rows.front().l1_norm_ball;
  return study;
}

}  // namespace slt
