#include "slt/muskat.hpp"

#include <algorithm>
#include <cmath>

#include "slt/brownian.hpp"
#include "slt/flow.hpp"
#include "slt/parallel.hpp"

namespace slt {

double StaggeredVelocity::max_boundary_normal() const {
  double m = 0.0;
  for (int j = 0; j < n; ++j) {
    m = std::max(m, std::fabs(u_at(0, j)));
    m = std::max(m, std::fabs(u_at(n, j)));
  }
  for (int i = 0; i < n; ++i) {
    m = std::max(m, std::fabs(v_at(i, 0)));
    m = std::max(m, std::fabs(v_at(i, n)));
  }
  return m;
}

double StaggeredVelocity::max_abs() const {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::fabs(x));
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

VectorField StaggeredVelocity::to_cell_field(const GridSpec& g) const {
  VectorField out(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * n + i;
      out.comps[0][c] = 0.5 * (u_at(i, j) + u_at(i + 1, j));
      out.comps[1][c] = 0.5 * (v_at(i, j) + v_at(i, j + 1));
    }
  return out;
}

DarcyResult darcy_solve(const ScalarField& mobility_mean,
                        const VectorField& body_force, double tol,
                        int max_iters) {
  const GridSpec& g = mobility_mean.grid;
  if (g.dim != 2 || g.boundary != Boundary::box)
    throw DomainError("Darcy solve expects a 2-d box grid");
  const int n = g.n;
  const double dx = g.spacing();
  const std::size_t cells = g.node_count();
  if (max_iters <= 0) max_iters = 40 * n;

  double h_lo = mobility_mean.values[0], h_hi = h_lo;
  for (double v : mobility_mean.values) {
    h_lo = std::min(h_lo, v);
    h_hi = std::max(h_hi, v);
  }
  if (!(h_lo > 0.0) || h_hi / h_lo > 1e12)
    throw ConditionError("mobility field is near-singular");

  const auto& H = mobility_mean.values;
  const auto& Gx = body_force.comps[0];
  const auto& Gy = body_force.comps[1];
  auto cell = [n](int i, int j) { return static_cast<std::size_t>(j) * n + i; };

  // Face transmissibilities 2/(H_l + H_r); zero on boundary normal faces.
  std::vector<double> kx(static_cast<std::size_t>(n + 1) * n, 0.0);
  std::vector<double> ky(static_cast<std::size_t>(n) * (n + 1), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i)
      kx[static_cast<std::size_t>(j) * (n + 1) + i] =
          2.0 / (H[cell(i - 1, j)] + H[cell(i, j)]);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i)
      ky[static_cast<std::size_t>(j) * n + i] =
          2.0 / (H[cell(i, j - 1)] + H[cell(i, j)]);

  // A p = div(K grad p) (5-point); rhs = div of the K*G face fluxes.
  auto apply_A = [&](const std::vector<double>& p, std::vector<double>& out) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t c = cell(i, j);
        double acc = 0.0;
        if (i < n - 1)
          acc += kx[static_cast<std::size_t>(j) * (n + 1) + i + 1] * (p[cell(i + 1, j)] - p[c]);
        if (i > 0)
          acc -= kx[static_cast<std::size_t>(j) * (n + 1) + i] * (p[c] - p[cell(i - 1, j)]);
        if (j < n - 1)
          acc += ky[static_cast<std::size_t>(j + 1) * n + i] * (p[cell(i, j + 1)] - p[c]);
        if (j > 0)
          acc -= ky[static_cast<std::size_t>(j) * n + i] * (p[c] - p[cell(i, j - 1)]);
        out[c] = acc / (dx * dx);
      }
  };

  std::vector<double> rhs(cells, 0.0);
  auto gx_face = [&](int i, int j) {  // face between cells (i-1,j) and (i,j)
    return 0.5 * (Gx[cell(i - 1, j)] + Gx[cell(i, j)]);
  };
  auto gy_face = [&](int i, int j) {
    return 0.5 * (Gy[cell(i, j - 1)] + Gy[cell(i, j)]);
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      if (i < n - 1)
        acc += kx[static_cast<std::size_t>(j) * (n + 1) + i + 1] * gx_face(i + 1, j);
      if (i > 0)
        acc -= kx[static_cast<std::size_t>(j) * (n + 1) + i] * gx_face(i, j);
      if (j < n - 1)
        acc += ky[static_cast<std::size_t>(j + 1) * n + i] * gy_face(i, j + 1);
      if (j > 0)
        acc -= ky[static_cast<std::size_t>(j) * n + i] * gy_face(i, j);
      rhs[cell(i, j)] = acc / dx;
    }

  auto project = [&](std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(cells);
    for (double& x : v) x -= mean;
  };
  project(rhs);

  // CG on (-A) p = -rhs, restricted to mean-zero fields.
  std::vector<double> p(cells, 0.0), r(cells), d(cells), q(cells);
  for (std::size_t c = 0; c < cells; ++c) r[c] = -rhs[c];
  d = r;
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < cells; ++c) s += a[c] * b[c];
    return s;
  };
  double rs = dot(r, r);
  DarcyResult result;
  int it = 0;
  while (max_abs(r) > tol) {
    if (it >= max_iters)
      throw EllipticError("pressure solve did not reach tolerance");
    apply_A(d, q);
    for (double& x : q) x = -x;  // SPD operator
    const double alpha = rs / dot(d, q);
    for (std::size_t c = 0; c < cells; ++c) {
      p[c] += alpha * d[c];
      r[c] -= alpha * q[c];
    }
    project(r);
    const double rs_new = dot(r, r);
    const double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t c = 0; c < cells; ++c) d[c] = r[c] + beta * d[c];
    ++it;
  }
  project(p);
  result.iterations = it;

  // v = K (G_face - grad p); boundary normal faces stay zero.
  StaggeredVelocity vel;
  vel.n = n;
  vel.extent = g.extent;
  vel.u.assign(static_cast<std::size_t>(n + 1) * n, 0.0);
  vel.v.assign(static_cast<std::size_t>(n) * (n + 1), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i)
      vel.u_at(i, j) = kx[static_cast<std::size_t>(j) * (n + 1) + i] *
                       (gx_face(i, j) - (p[cell(i, j)] - p[cell(i - 1, j)]) / dx);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i)
      vel.v_at(i, j) = ky[static_cast<std::size_t>(j) * n + i] *
                       (gy_face(i, j) - (p[cell(i, j)] - p[cell(i, j - 1)]) / dx);

  double max_div = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double div = (vel.u_at(i + 1, j) - vel.u_at(i, j)) / dx +
                         (vel.v_at(i, j + 1) - vel.v_at(i, j)) / dx;
      max_div = std::max(max_div, std::fabs(div));
    }
  result.max_div = max_div;

  result.pressure = ScalarField(g);
  result.pressure.values = std::move(p);
  result.velocity = std::move(vel);
  return result;
}

void MuskatConfig::validate() {
  grid.validate();
  if (grid.dim != 2 || grid.boundary != Boundary::box)
    throw ConfigError("Muskat runs on a 2-d box grid");
  if (sigma < 0.0) throw ConfigError("noise amplitude must be nonnegative");
  if (!(h0 > 0.0)) throw ConfigError("mobility floor h0 must be positive");
  if (rho0.values.size() != grid.node_count() ||
      nu0.values.size() != grid.node_count())
    throw ConfigError("initial phases must live on the configured grid");
  if (mesh_times < 1 || n_paths < 1 || max_iterations < 1)
    throw ConfigError("mesh_times, n_paths and max_iterations must be positive");
  if (damping <= 0.0 || damping > 1.0)
    throw ConfigError("damping must lie in (0, 1]");
  rho0.check_finite("rho0");
  nu0.check_finite("nu0");
  phase_lo = std::min(*std::min_element(rho0.values.begin(), rho0.values.end()),
                      *std::min_element(nu0.values.begin(), nu0.values.end()));
  phase_hi = std::max(*std::max_element(rho0.values.begin(), rho0.values.end()),
                      *std::max_element(nu0.values.begin(), nu0.values.end()));
  if (fp_tolerance <= 0.0)
    fp_tolerance = 1e-3 * std::sqrt(horizon) * l2_norm(rho0);
}

ScalarField mobility_expectation(const MuskatConfig& config,
                                 const std::vector<ScalarField>& rho_paths,
                                 const std::vector<ScalarField>& nu_paths) {
  if (rho_paths.empty() || rho_paths.size() != nu_paths.size())
    throw ConfigError("mobility expectation needs matching phase paths");
  const std::size_t cells = config.grid.node_count();
  ScalarField H(config.grid);
  for (std::size_t p = 0; p < rho_paths.size(); ++p)
    for (std::size_t c = 0; c < cells; ++c)
      H.values[c] += config.mobility_value(rho_paths[p].values[c] * nu_paths[p].values[c]);
  for (double& v : H.values) v /= static_cast<double>(rho_paths.size());
  for (double v : H.values)
    if (v < config.h0 - 1e-12)
      throw ConfigError("mobility expectation dropped below h0");
  return H;
}

ScalarField layered_field(const GridSpec& g, double bottom, double top,
                          double interface_y, double perturb_amplitude,
                          int perturb_mode, double interface_width) {
  ScalarField f(g);
  double x[3];
  const double L = g.extent;
  for (std::size_t c = 0; c < f.values.size(); ++c) {
    g.node_position(c, x);
    const double yi = interface_y +
                      perturb_amplitude *
                          std::cos(perturb_mode * std::acos(-1.0) * (x[0] + L) / L);
    const double s = (x[1] - yi) / interface_width;
    double w;  // 0 below the interface, 1 above
    if (s <= -1.0)
      w = 0.0;
    else if (s >= 1.0)
      w = 1.0;
    else
      w = 0.5 + s * (0.9375 + s * s * (-0.625 + 0.1875 * s * s));  // quintic
    f.values[c] = bottom + (top - bottom) * w;
  }
  return f;
}

MuskatConfig desk64_preset(std::uint64_t master_seed) {
  MuskatConfig c;
  c.grid = GridSpec{2, 1.0, 64, Boundary::box};
  c.sigma = 0.05;
  c.mobility = MobilityLaw::affine;
  c.h0 = 1.0;
  c.gravity = {0.0, -1.0};
  c.horizon = 0.5;
  c.mesh_times = 20;
  c.n_paths = 200;
  c.max_iterations = 30;
  c.master_seed = master_seed;
  c.rho0 = layered_field(c.grid, 1.0, 2.0, 0.0, 0.15, 1, 0.1);
  c.nu0 = layered_field(c.grid, 1.0, 1.5, 0.0, 0.15, 1, 0.1);
  c.validate();
  return c;
}

namespace {

// Per-slice coefficient accumulators gathered while sweeping paths.
struct CoefficientSums {
  std::vector<std::vector<double>> sum_h;    // per mesh time, per cell
  std::vector<std::vector<double>> sum_rho;  // per mesh time, per cell

  void init(int slices, std::size_t cells) {
    sum_h.assign(slices, std::vector<double>(cells, 0.0));
    sum_rho.assign(slices, std::vector<double>(cells, 0.0));
  }
};

SampledDrift velocity_from_coefficients(const MuskatConfig& cfg,
                                        const std::vector<ScalarField>& H,
                                        const std::vector<ScalarField>& G_scale,
                                        const SampledDrift* v_prev,
                                        MuskatIterationStats& stats) {
  SampledDrift v;
  v.grid = cfg.grid;
  v.t0 = 0.0;
  v.slice_dt = cfg.horizon / cfg.mesh_times;
  stats.min_mobility = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= cfg.mesh_times; ++m) {
    VectorField G(cfg.grid);
    for (std::size_t c = 0; c < G_scale[m].values.size(); ++c) {
      G.comps[0][c] = G_scale[m].values[c] * cfg.gravity[0];
      G.comps[1][c] = G_scale[m].values[c] * cfg.gravity[1];
    }
    DarcyResult darcy = darcy_solve(H[m], G);
    stats.max_div_v = std::max(stats.max_div_v, darcy.max_div);
    stats.max_boundary_normal =
        std::max(stats.max_boundary_normal, darcy.velocity.max_boundary_normal());
    double h_min = H[m].values[0];
    for (double x : H[m].values) h_min = std::min(h_min, x);
    stats.min_mobility = std::min(stats.min_mobility, h_min);

    VectorField cellv = darcy.velocity.to_cell_field(cfg.grid);
    if (cfg.damping < 1.0 && v_prev) {
      const VectorField& old = v_prev->slices[m];
      for (int a = 0; a < 2; ++a)
        for (std::size_t c = 0; c < cellv.comps[a].size(); ++c)
          cellv.comps[a][c] = cfg.damping * cellv.comps[a][c] +
                              (1.0 - cfg.damping) * old.comps[a][c];
    }
    v.slices.push_back(std::move(cellv));
    // Divergence bookkeeping: keep the staggered residual magnitude.
    v.divs.push_back(ScalarField(cfg.grid, 0.0));
    v.div_sup.push_back(darcy.max_div);
  }
  return v;
}

}  // namespace

MuskatResult fixed_point_iterate(const MuskatConfig& config_in) {
  MuskatConfig cfg = config_in;
  cfg.validate();
  const GridSpec& g = cfg.grid;
  const std::size_t cells = g.node_count();
  const int M = cfg.mesh_times;
  const double dt_mesh = cfg.horizon / M;
  const double cell_w = g.cell_volume();

  MuskatResult result;
  result.fp_tolerance = cfg.fp_tolerance;

  // Iterate 0: phases held constant in time at their initial data.
  std::vector<ScalarField> H(M + 1), Gs(M + 1);
  {
    ScalarField h0field(g);
    for (std::size_t c = 0; c < cells; ++c)
      h0field.values[c] = cfg.mobility_value(cfg.rho0.values[c] * cfg.nu0.values[c]);
    for (int m = 0; m <= M; ++m) {
      H[m] = h0field;
      Gs[m] = cfg.rho0;  // G = E[rho] g, scalar part
    }
  }

  SampledDrift v_prev;  // velocity of the previous iterate (empty before k=1)
  bool have_prev = false;
  int rising_streak = 0;
  double prev_change = std::numeric_limits<double>::infinity();

  constexpr std::size_t kBlock = 16;
  const std::size_t blocks = block_count(cfg.n_paths, kBlock);

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    MuskatIterationStats stats;
    stats.k = k;

    for (int m = 0; m <= M; ++m)
      for (double v : H[m].values)
        if (v < cfg.h0 - 1e-12)
          throw ConfigError("mobility expectation dropped below h0");

    SampledDrift v_new =
        velocity_from_coefficients(cfg, H, Gs, have_prev ? &v_prev : nullptr, stats);

    // Transport both phases per path under the new velocity; compare with
    // the previous iterate's trajectories (recomputed from v_prev) and
    // gather the coefficient sums for the next iteration.
    struct BlockOut {
      CoefficientSums coeff;
      double diff_rho = 0.0, diff_nu = 0.0;
      double ph_min = std::numeric_limits<double>::infinity();
      double ph_max = -std::numeric_limits<double>::infinity();
      std::vector<double> rho_final, nu_final;
    };
    std::vector<BlockOut> out(blocks);

    parallel_blocks(cfg.n_paths, kBlock, [&](std::size_t bi, std::size_t lo,
                                             std::size_t hi) {
      BlockOut& B = out[bi];
      B.coeff.init(M + 1, cells);
      B.rho_final.assign(cells, 0.0);
      B.nu_final.assign(cells, 0.0);
      double xp[3] = {0.0, 0.0, 0.0};
      for (std::size_t p = lo; p < hi; ++p) {
        const BrownianPath path =
            BrownianPath::sample(cfg.master_seed, p, 2, cfg.horizon, M);
        // t_0 slice: every iterate starts from the initial data.
        for (std::size_t c = 0; c < cells; ++c) {
          B.coeff.sum_h[0][c] +=
              cfg.mobility_value(cfg.rho0.values[c] * cfg.nu0.values[c]);
          B.coeff.sum_rho[0][c] += cfg.rho0.values[c];
        }
        for (int m = 1; m <= M; ++m) {
          const double tm = m * dt_mesh;
          const FlowField back_new = inverse_flow(v_new, path, tm, cfg.sigma);
          const FlowField back_old =
              have_prev ? inverse_flow(v_prev, path, tm, cfg.sigma) : FlowField{};
          for (std::size_t c = 0; c < cells; ++c) {
            xp[0] = back_new.positions[0][c];
            xp[1] = back_new.positions[1][c];
            const double rho_n = sample(cfg.rho0, xp);
            const double nu_n = sample(cfg.nu0, xp);
            B.coeff.sum_h[m][c] += cfg.mobility_value(rho_n * nu_n);
            B.coeff.sum_rho[m][c] += rho_n;
            if (rho_n < B.ph_min) B.ph_min = rho_n;
            if (nu_n < B.ph_min) B.ph_min = nu_n;
            if (rho_n > B.ph_max) B.ph_max = rho_n;
            if (nu_n > B.ph_max) B.ph_max = nu_n;
            if (m == M) {
              B.rho_final[c] += rho_n;
              B.nu_final[c] += nu_n;
            }
            double rho_o, nu_o;
            if (have_prev) {
              xp[0] = back_old.positions[0][c];
              xp[1] = back_old.positions[1][c];
              rho_o = sample(cfg.rho0, xp);
              nu_o = sample(cfg.nu0, xp);
            } else {
              rho_o = cfg.rho0.values[c];
              nu_o = cfg.nu0.values[c];
            }
            const double dr = rho_n - rho_o;
            const double dn = nu_n - nu_o;
            B.diff_rho += dr * dr * cell_w * dt_mesh;
            B.diff_nu += dn * dn * cell_w * dt_mesh;
          }
        }
      }
    });

    // Deterministic fold over blocks.
    std::vector<ScalarField> H_next(M + 1), G_next(M + 1);
    for (int m = 0; m <= M; ++m) {
      H_next[m] = ScalarField(g);
      G_next[m] = ScalarField(g);
      for (const auto& B : out)
        for (std::size_t c = 0; c < cells; ++c) {
          H_next[m].values[c] += B.coeff.sum_h[m][c];
          G_next[m].values[c] += B.coeff.sum_rho[m][c];
        }
      for (std::size_t c = 0; c < cells; ++c) {
        H_next[m].values[c] /= cfg.n_paths;
        G_next[m].values[c] /= cfg.n_paths;
      }
    }
    double diff_rho = 0.0, diff_nu = 0.0;
    stats.phase_min = cfg.phase_lo;
    stats.phase_max = cfg.phase_hi;
    result.mean_rho_final = ScalarField(g);
    result.mean_nu_final = ScalarField(g);
    for (const auto& B : out) {
      diff_rho += B.diff_rho;
      diff_nu += B.diff_nu;
      if (B.ph_min < stats.phase_min) stats.phase_min = B.ph_min;
      if (B.ph_max > stats.phase_max) stats.phase_max = B.ph_max;
      for (std::size_t c = 0; c < cells; ++c) {
        result.mean_rho_final.values[c] += B.rho_final[c];
        result.mean_nu_final.values[c] += B.nu_final[c];
      }
    }
    for (std::size_t c = 0; c < cells; ++c) {
      result.mean_rho_final.values[c] /= cfg.n_paths;
      result.mean_nu_final.values[c] /= cfg.n_paths;
    }
    stats.change = std::sqrt(diff_rho / cfg.n_paths) + std::sqrt(diff_nu / cfg.n_paths);

    result.iterations.push_back(stats);

    if (stats.change > prev_change) {
      if (++rising_streak >= 3) result.non_contractive = true;
    } else {
      rising_streak = 0;
    }
    prev_change = stats.change;

    if (stats.change < cfg.fp_tolerance) {
      result.converged = true;
      break;
    }

    H = std::move(H_next);
    Gs = std::move(G_next);
    v_prev = std::move(v_new);
    have_prev = true;
  }

  return result;
}

}  // namespace slt
