#include "slt/parabolic.hpp"

#include <algorithm>
#include <cmath>

namespace slt {

namespace {

double shift_max_component(const ExponentialSpec& h, double horizon) {
  double m = 0.0;
  double hv[3];
  const int samples = 1024;
  for (int k = 0; k <= samples; ++k) {
    h.value(horizon * k / samples, hv);
    for (int a = 0; a < h.dim; ++a) m = std::max(m, std::fabs(hv[a]));
  }
  return m;
}

}  // namespace

ParabolicRun parabolic_solve(const ScalarField& V0, const SampledDrift& drift,
                             const ExponentialSpec& h, double horizon,
                             const std::vector<double>& output_times) {
  const GridSpec& g = V0.grid;
  if (!(g == drift.grid)) throw MeshError("initial datum and drift grids differ");
  if (g.boundary != Boundary::periodic)
    throw DomainError("parabolic solver runs on periodic grids");
  if (h.dim != g.dim) throw MeshError("shift dimension differs from the grid");

  const double dx = g.spacing();
  const double w_max = drift.max_component() + shift_max_component(h, horizon);
  if (!std::isfinite(w_max)) throw StepSizeError("advection speed is not finite");
  double dt_raw = 0.4 * dx * dx / g.dim;  // diffusion bound, coefficient 1/2
  if (w_max > 0.0) dt_raw = std::min(dt_raw, 0.4 * dx / w_max);
  const double max_steps = 2e7;
  if (horizon / dt_raw > max_steps)
    throw StepSizeError("CFL-degenerate configuration: too many steps");

  ParabolicRun run;
  run.grid = g;
  run.shift = h;
  run.steps = static_cast<int>(std::ceil(horizon / dt_raw));
  run.dt = horizon / run.steps;

  run.output_times.reserve(output_times.size());
  run.output_steps.reserve(output_times.size());
  for (double t : output_times) {
    int m = static_cast<int>(std::lround(t / run.dt));
    m = std::clamp(m, 0, run.steps);
    run.output_steps.push_back(m);
    run.output_times.push_back(m * run.dt);
  }

  const std::size_t count = g.node_count();
  std::vector<double> v = V0.values;
  std::vector<double> vn(count);

  run.min_initial = *std::min_element(v.begin(), v.end());
  run.max_initial = *std::max_element(v.begin(), v.end());

  const double cell = g.cell_volume();
  auto record_state = [&](int m) {
    double e = 0.0, ms = 0.0;
    for (double x : v) {
      e += x * x;
      ms += x;
    }
    run.energy.push_back(e * cell);
    run.mass.push_back(ms * cell);
    (void)m;
  };

  run.dissipation_cum.push_back(0.0);
  run.divb_term_cum.push_back(0.0);
  run.gamma_cum.push_back(0.0);
  record_state(0);
  run.initial_energy = run.energy[0];

  auto maybe_emit = [&](int m) {
    for (std::size_t q = 0; q < run.output_steps.size(); ++q) {
      if (run.output_steps[q] == m) {
        ScalarField f(g);
        f.values = v;
        f.time_tag = m * run.dt;
        if (run.outputs.size() <= q) run.outputs.resize(run.output_steps.size());
        run.outputs[q] = std::move(f);
      }
    }
  };
  maybe_emit(0);

  const int n = g.n;
  const double invdx = 1.0 / dx;
  const double invdx2 = invdx * invdx;
  const double dt = run.dt;
  double hv[3];

  for (int m = 0; m < run.steps; ++m) {
    const double tm = m * dt;
    const VectorField& b = drift.at_time(tm);
    const ScalarField& divb = drift.div_at_time(tm);
    const double gamma = drift.div_sup[drift.slice_index(tm)];
    h.value(tm, hv);

    double diss = 0.0;   // forward-difference |grad V|^2, exact partner of the Laplacian
    double divv2 = 0.0;  // int div b V^2

    if (g.dim == 2) {
      const double* bx = b.comps[0].data();
      const double* by = b.comps[1].data();
      for (int j = 0; j < n; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        const std::size_t rowp = static_cast<std::size_t>(j + 1 == n ? 0 : j + 1) * n;
        const std::size_t rowm = static_cast<std::size_t>(j == 0 ? n - 1 : j - 1) * n;
        for (int i = 0; i < n; ++i) {
          const int ip = i + 1 == n ? 0 : i + 1;
          const int im = i == 0 ? n - 1 : i - 1;
          const std::size_t c = row + i;
          const double vc = v[c];
          const double ve = v[row + ip];
          const double vw = v[row + im];
          const double vn_ = v[rowp + i];
          const double vs = v[rowm + i];

          const double wx = bx[c] + hv[0];
          const double wy = by[c] + hv[1];
          const double adv_x = wx > 0.0 ? wx * (vc - vw) : wx * (ve - vc);
          const double adv_y = wy > 0.0 ? wy * (vc - vs) : wy * (vn_ - vc);
          const double lap = (ve - 2.0 * vc + vw) + (vn_ - 2.0 * vc + vs);

          vn[c] = vc - dt * invdx * (adv_x + adv_y) + 0.5 * dt * invdx2 * lap;

          const double dxp = (ve - vc) * invdx;
          const double dyp = (vn_ - vc) * invdx;
          diss += dxp * dxp + dyp * dyp;
          divv2 += divb.values[c] * vc * vc;
        }
      }
    } else {
      // generic 1D / 3D update
      std::size_t stride[3] = {1, static_cast<std::size_t>(n),
                               static_cast<std::size_t>(n) * n};
      for (std::size_t c = 0; c < count; ++c) {
        double adv = 0.0, lap = 0.0, dsq = 0.0;
        std::size_t rest = c;
        for (int a = 0; a < g.dim; ++a) {
          const int ia = static_cast<int>(rest % n);
          rest /= n;
          const std::size_t cp =
              ia + 1 == n ? c - stride[a] * (n - 1) : c + stride[a];
          const std::size_t cm =
              ia == 0 ? c + stride[a] * (n - 1) : c - stride[a];
          const double wa = b.comps[a][c] + hv[a];
          adv += wa > 0.0 ? wa * (v[c] - v[cm]) : wa * (v[cp] - v[c]);
          lap += v[cp] - 2.0 * v[c] + v[cm];
          const double dp = (v[cp] - v[c]) * invdx;
          dsq += dp * dp;
        }
        vn[c] = v[c] - dt * invdx * adv + 0.5 * dt * invdx2 * lap;
        diss += dsq;
        divv2 += divb.values[c] * v[c] * v[c];
      }
    }

    v.swap(vn);

    run.dissipation_cum.push_back(run.dissipation_cum.back() + diss * cell * dt);
    run.divb_term_cum.push_back(run.divb_term_cum.back() + divv2 * cell * dt);
    run.gamma_cum.push_back(run.gamma_cum.back() + gamma * dt);
    record_state(m + 1);

    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    run.max_principle_excess =
        std::max({run.max_principle_excess, run.min_initial - lo, hi - run.max_initial});

    maybe_emit(m + 1);
  }

  return run;
}

std::vector<EnergyRow> energy_series(const ParabolicRun& run) {
  std::vector<EnergyRow> rows;
  rows.reserve(run.output_steps.size());
  for (std::size_t q = 0; q < run.output_steps.size(); ++q) {
    const int m = run.output_steps[q];
    EnergyRow r;
    r.t = run.output_times[q];
    r.energy = run.energy[m];
    r.dissipation = run.dissipation_cum[m];
    r.balance_residual =
        r.energy + r.dissipation - run.initial_energy - run.divb_term_cum[m];
    rows.push_back(r);
  }
  return rows;
}

GronwallReport gronwall_check(const ParabolicRun& run) {
  GronwallReport rep;
  bool all = true;
  for (std::size_t q = 0; q < run.output_steps.size(); ++q) {
    const int m = run.output_steps[q];
    GronwallRow r;
    r.t = run.output_times[q];
    r.lhs = run.energy[m];
    r.bound = std::exp(run.gamma_cum[m]) * run.initial_energy * (1.0 + rep.slack);
    r.pass = r.lhs <= r.bound || run.initial_energy == 0.0;
    all = all && r.pass;
    rep.rows.push_back(r);
  }
  // Gradient bound from the energy balance: int int |grad V|^2 <=
  // E0 (1 + int gamma e^{int gamma}).
  double cgrad = 1.0;
  for (std::size_t m = 0; m + 1 < run.gamma_cum.size(); ++m) {
    const double gdt = run.gamma_cum[m + 1] - run.gamma_cum[m];
    cgrad += gdt * std::exp(run.gamma_cum[m]);
  }
  rep.gradient_lhs = run.dissipation_cum.back();
  rep.gradient_bound = cgrad * run.initial_energy * (1.0 + rep.slack);
  rep.gradient_pass =
      rep.gradient_lhs <= rep.gradient_bound || run.initial_energy == 0.0;
  rep.pass = all && rep.gradient_pass;
  return rep;
}

}  // namespace slt
