#include "slt/meanfield.hpp"

#include <algorithm>
#include <cmath>

#include "slt/parallel.hpp"

namespace slt {

namespace {
constexpr std::size_t kBlock = 64;
}

std::vector<MeanEstimate> estimate_mean_multi(
    const ScalarField& u0, const SampledDrift& b_eps,
    const std::vector<ExponentialSpec>& shifts, double t, int n_paths,
    int steps, std::uint64_t master_seed) {
  if (n_paths < 1) throw ConfigError("estimate_mean needs at least one path");
  if (shifts.empty()) throw ConfigError("estimate_mean needs at least one shift");
  const GridSpec& g = u0.grid;
  const std::size_t count = g.node_count();
  const std::size_t n_h = shifts.size();
  const double horizon = shifts.front().horizon;
  for (const auto& h : shifts)
    if (std::fabs(h.horizon - horizon) > 1e-12)
      throw MeshError("shift family must share one horizon");

  struct BlockAcc {
    std::vector<double> sum;   // n_h * count
    std::vector<double> sum2;  // n_h * count
    std::vector<long> used;    // per shift
    long failed_transport = 0;
  };
  const std::size_t blocks = block_count(n_paths, kBlock);
  std::vector<BlockAcc> acc(blocks);

  parallel_blocks(n_paths, kBlock, [&](std::size_t bi, std::size_t lo, std::size_t hi) {
    BlockAcc& A = acc[bi];
    A.sum.assign(n_h * count, 0.0);
    A.sum2.assign(n_h * count, 0.0);
    A.used.assign(n_h, 0);
    for (std::size_t p = lo; p < hi; ++p) {
      const BrownianPath path =
          BrownianPath::sample(master_seed, p, g.dim, horizon, steps);
      ScalarField u;
      try {
        u = transport_solve(u0, b_eps, path, t);
      } catch (const Error&) {
        ++A.failed_transport;
        continue;
      }
      for (std::size_t q = 0; q < n_h; ++q) {
        double f;
        try {
          f = exponential_at(shifts[q], path, horizon);
        } catch (const RangeError&) {
          continue;  // counted via used[q]
        }
        double* s = A.sum.data() + q * count;
        double* s2 = A.sum2.data() + q * count;
        for (std::size_t i = 0; i < count; ++i) {
          const double v = u.values[i] * f;
          s[i] += v;
          s2[i] += v * v;
        }
        ++A.used[q];
      }
    }
  });

  std::vector<MeanEstimate> out(n_h);
  long failed_transport = 0;
  for (const auto& A : acc) failed_transport += A.failed_transport;

  for (std::size_t q = 0; q < n_h; ++q) {
    MeanEstimate& e = out[q];
    e.grid = g;
    e.t = t;
    e.shift = shifts[q];
    e.n_paths = n_paths;
    e.master_seed = master_seed;
    e.mean = ScalarField(g);
    e.std_error = ScalarField(g);
    e.mean.time_tag = t;

    long used = 0;
    for (const auto& A : acc) used += A.used[q];
    e.failed_paths = n_paths - static_cast<int>(used);
    if (e.failed_paths > 0.01 * n_paths)
      throw RunError("more than 1% of Monte-Carlo paths failed");

    std::vector<double> sum(count, 0.0), sum2(count, 0.0);
    for (const auto& A : acc) {
      const double* s = A.sum.data() + q * count;
      const double* s2 = A.sum2.data() + q * count;
      for (std::size_t i = 0; i < count; ++i) {
        sum[i] += s[i];
        sum2[i] += s2[i];
      }
    }
    const double M = static_cast<double>(used);
    for (std::size_t i = 0; i < count; ++i) {
      const double mean = sum[i] / M;
      e.mean.values[i] = mean;
      if (used > 1) {
        const double var = std::max(0.0, (sum2[i] - M * mean * mean) / (M - 1.0));
        e.std_error.values[i] = std::sqrt(var / M);
      } else {
        e.std_error.values[i] = 0.0;
      }
    }
  }
  return out;
}

MeanEstimate estimate_mean(const ScalarField& u0, const DriftSpec& drift,
                           const MollifierSpec& mollifier,
                           const ExponentialSpec& h, double t, int n_paths,
                           int steps, std::uint64_t master_seed) {
  const SampledDrift b_eps = make_mollified_drift(drift, u0.grid, mollifier);
  return estimate_mean_multi(u0, b_eps, {h}, t, n_paths, steps, master_seed)[0];
}

MeanCompareReport compare_with_parabolic(const MeanEstimate& est,
                                         const ParabolicRun& run,
                                         double scheme_tol) {
  if (!(est.grid == run.grid))
    throw MeshError("estimate and parabolic run grids differ");
  const ScalarField* oracle = nullptr;
  for (std::size_t q = 0; q < run.output_times.size(); ++q)
    if (std::fabs(run.output_times[q] - est.t) <= run.dt) oracle = &run.outputs[q];
  if (!oracle) throw MeshError("parabolic run has no output near the estimate time");

  MeanCompareReport rep;
  const std::size_t count = est.grid.node_count();
  const double cell = est.grid.cell_volume();
  double diff2 = 0.0, ref2 = 0.0, se2 = 0.0;
  std::size_t exceed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = est.mean.values[i] - oracle->values[i];
    const double se = est.std_error.values[i];
    diff2 += d * d;
    ref2 += oracle->values[i] * oracle->values[i];
    se2 += se * se;
    if (se > 0.0) {
      if (std::fabs(d) > 3.0 * se) ++exceed;
    } else if (std::fabs(d) > 1e-12) {
      ++exceed;
    }
  }
  const double ref = std::sqrt(ref2 * cell);
  rep.rel_l2 = ref > 0.0 ? std::sqrt(diff2 * cell) / ref : std::sqrt(diff2 * cell);
  rep.pooled_se_rel = ref > 0.0 ? std::sqrt(se2 * cell) / ref : std::sqrt(se2 * cell);
  rep.frac_z_exceed = static_cast<double>(exceed) / count;
  rep.threshold = 3.0 * rep.pooled_se_rel + scheme_tol;
  rep.pass = rep.rel_l2 <= rep.threshold && rep.frac_z_exceed <= 0.05;
  return rep;
}

std::vector<UniquenessReport> uniqueness_experiment(
    const ScalarField& u0, const DriftSpec& drift,
    const std::vector<double>& ladder_a, KernelKind kernel_a,
    const std::vector<double>& ladder_b, KernelKind kernel_b,
    const std::vector<ExponentialSpec>& shifts, double t, int n_paths,
    int steps, std::uint64_t master_seed) {
  if (ladder_a.size() != ladder_b.size() || ladder_a.empty())
    throw ConfigError("mollifier ladders must have equal, nonzero length");
  auto check_decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (!(v[i + 1] < v[i])) throw ConfigError("epsilon ladder must decrease");
  };
  check_decreasing(ladder_a);
  check_decreasing(ladder_b);

  const GridSpec& g = u0.grid;
  const std::size_t count = g.node_count();
  const std::size_t n_h = shifts.size();
  const double horizon = shifts.front().horizon;
  const std::size_t blocks = block_count(n_paths, kBlock);

  std::vector<UniquenessReport> reports(n_h);
  for (std::size_t q = 0; q < n_h; ++q) reports[q].shift_name = shifts[q].name;

  for (std::size_t level = 0; level < ladder_a.size(); ++level) {
    MollifierSpec ma{ladder_a[level], kernel_a, 0.0};
    MollifierSpec mb{ladder_b[level], kernel_b, 0.0};
    const SampledDrift ba = make_mollified_drift(drift, g, ma);
    const SampledDrift bb = make_mollified_drift(drift, g, mb);

    struct BlockAcc {
      std::vector<double> sum_d, sum_d2, sum_a, sum_b;
    };
    std::vector<BlockAcc> acc(blocks);

    parallel_blocks(n_paths, kBlock, [&](std::size_t bi, std::size_t lo, std::size_t hi) {
      BlockAcc& A = acc[bi];
      A.sum_d.assign(n_h * count, 0.0);
      A.sum_d2.assign(n_h * count, 0.0);
      A.sum_a.assign(n_h * count, 0.0);
      A.sum_b.assign(n_h * count, 0.0);
      for (std::size_t p = lo; p < hi; ++p) {
        const BrownianPath path =
            BrownianPath::sample(master_seed, p, g.dim, horizon, steps);
        const ScalarField ua = transport_solve(u0, ba, path, t);
        const ScalarField ub = transport_solve(u0, bb, path, t);
        for (std::size_t q = 0; q < n_h; ++q) {
          const double f = exponential_at(shifts[q], path, horizon);
          double* sd = A.sum_d.data() + q * count;
          double* sd2 = A.sum_d2.data() + q * count;
          double* sa = A.sum_a.data() + q * count;
          double* sb = A.sum_b.data() + q * count;
          for (std::size_t i = 0; i < count; ++i) {
            const double va = ua.values[i] * f;
            const double vb = ub.values[i] * f;
            const double d = va - vb;
            sd[i] += d;
            sd2[i] += d * d;
            sa[i] += va;
            sb[i] += vb;
          }
        }
      }
    });

    const double M = n_paths;
    const double cell = g.cell_volume();
    for (std::size_t q = 0; q < n_h; ++q) {
      double gap2 = 0.0, se2 = 0.0, na2 = 0.0, nb2 = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        double sd = 0.0, sd2 = 0.0, sa = 0.0, sb = 0.0;
        for (const auto& A : acc) {
          sd += A.sum_d[q * count + i];
          sd2 += A.sum_d2[q * count + i];
          sa += A.sum_a[q * count + i];
          sb += A.sum_b[q * count + i];
        }
        const double mean_d = sd / M;
        gap2 += mean_d * mean_d;
        if (n_paths > 1) {
          const double var = std::max(0.0, (sd2 - M * mean_d * mean_d) / (M - 1.0));
          se2 += var / M;
        }
        na2 += (sa / M) * (sa / M);
        nb2 += (sb / M) * (sb / M);
      }
      UniquenessLevel lv;
      lv.eps_a = ladder_a[level];
      lv.eps_b = ladder_b[level];
      lv.gap = std::sqrt(gap2 * cell);
      lv.pooled_se = std::sqrt(se2 * cell);
      lv.scale = 0.5 * (std::sqrt(na2 * cell) + std::sqrt(nb2 * cell));
      reports[q].levels.push_back(lv);
    }
  }

  for (auto& rep : reports) {
    bool decreasing = true;
    for (std::size_t l = 0; l + 1 < rep.levels.size(); ++l)
      if (rep.levels[l + 1].gap > 1.10 * rep.levels[l].gap) decreasing = false;
    const UniquenessLevel& last = rep.levels.back();
    const double disc_tol = 0.01 * last.scale;
    rep.decreasing = decreasing;
    rep.final_small = last.gap <= 3.0 * last.pooled_se + 2.0 * disc_tol;
    rep.pass = rep.decreasing && rep.final_small;
  }
  return reports;
}

// ---------------------------------------------------------------------------

namespace {

// 1-d bump profile exp(1 - 1/(1-s^2)) on |s| < 1, peak value 1.
inline double bump1(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}
inline double bump1_d(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  const double w = 1.0 / q;
  return -2.0 * s * w * w * bump1(s);
}
inline double bump1_dd(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  const double w = 1.0 / q;
  const double wp = 2.0 * s * w * w;
  const double wpp = 2.0 * w * w + 8.0 * s * s * w * w * w;
  return (wp * wp - wpp) * bump1(s);
}

}  // namespace

double TestFunction::value(const GridSpec& g, const double* x) const {
  double v = 1.0;
  for (int a = 0; a < g.dim; ++a) v *= bump1((x[a] - center[a]) / radius);
  return v;
}

void TestFunction::gradient(const GridSpec& g, const double* x, double* out) const {
  double vals[3], ders[3];
  for (int a = 0; a < g.dim; ++a) {
    const double s = (x[a] - center[a]) / radius;
    vals[a] = bump1(s);
    ders[a] = bump1_d(s) / radius;
  }
  for (int a = 0; a < g.dim; ++a) {
    double v = ders[a];
    for (int b = 0; b < g.dim; ++b)
      if (b != a) v *= vals[b];
    out[a] = v;
  }
}

double TestFunction::laplacian(const GridSpec& g, const double* x) const {
  double vals[3], dders[3];
  for (int a = 0; a < g.dim; ++a) {
    const double s = (x[a] - center[a]) / radius;
    vals[a] = bump1(s);
    dders[a] = bump1_dd(s) / (radius * radius);
  }
  double acc = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    double v = dders[a];
    for (int b = 0; b < g.dim; ++b)
      if (b != a) v *= vals[b];
    acc += v;
  }
  return acc;
}

std::vector<TestFunction> test_function_catalog(const GridSpec& g) {
  const double L = g.extent;
  std::vector<TestFunction> phis(3);
  phis[0].center = {0.0, 0.0, 0.0};
  phis[1].center = {-L / 3.0, L / 6.0, 0.0};
  phis[2].center = {L / 4.0, -L / 4.0, 0.0};
  for (auto& p : phis) p.radius = L / 2.2;
  return phis;
}

std::vector<ScalarField> transport_trajectory(const ScalarField& u0,
                                              const SampledDrift& b,
                                              const BrownianPath& path,
                                              double t) {
  const int kt = mesh_index(path, t);
  std::vector<ScalarField> traj;
  traj.reserve(kt + 1);
  traj.push_back(u0);
  traj.front().time_tag = 0.0;
  for (int k = 1; k <= kt; ++k)
    traj.push_back(transport_solve(u0, b, path, k * path.dt()));
  return traj;
}

WeakFormTerms weak_form_residual(const std::vector<ScalarField>& trajectory,
                                 const SampledDrift& b,
                                 const BrownianPath& path,
                                 const TestFunction& phi) {
  if (trajectory.empty()) throw ConfigError("empty transport trajectory");
  const GridSpec& g = trajectory.front().grid;
  for (int a = 0; a < g.dim; ++a)
    if (std::fabs(phi.center[a]) + phi.radius >= g.extent)
      throw DomainError("test function support touches the wrap seam");

  const std::size_t count = g.node_count();
  const double cell = g.cell_volume();
  const double dt = path.dt();
  const int m = static_cast<int>(trajectory.size()) - 1;

  // Precompute phi, grad phi, lap phi on the grid.
  std::vector<double> pv(count), pl(count);
  std::vector<std::array<double, 3>> pg(count);
  double x[3];
  for (std::size_t i = 0; i < count; ++i) {
    g.node_position(i, x);
    pv[i] = phi.value(g, x);
    phi.gradient(g, x, pg[i].data());
    pl[i] = phi.laplacian(g, x);
  }

  WeakFormTerms terms;
  auto integrate_phi = [&](const ScalarField& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += u.values[i] * pv[i];
    return s * cell;
  };
  terms.lhs = integrate_phi(trajectory.back());
  terms.initial = integrate_phi(trajectory.front());

  for (int k = 0; k < m; ++k) {
    const ScalarField& u = trajectory[k];
    const VectorField& bk = b.at_time(k * dt);
    const ScalarField& divk = b.div_at_time(k * dt);
    double drift = 0.0, divt = 0.0, lap = 0.0;
    double ito_vec[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < count; ++i) {
      const double uv = u.values[i];
      double bg = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        bg += bk.comps[a][i] * pg[i][a];
        ito_vec[a] += uv * pg[i][a];
      }
      drift += uv * bg;
      divt += uv * pv[i] * divk.values[i];
      lap += uv * pl[i];
    }
    terms.drift_term += drift * cell * dt;
    terms.div_term += divt * cell * dt;
    terms.laplace_term += 0.5 * lap * cell * dt;
    for (int a = 0; a < g.dim; ++a)
      terms.ito_term += ito_vec[a] * cell * path.increment(k, a);
  }

  terms.residual = terms.lhs - terms.initial - terms.drift_term -
                   terms.div_term - terms.ito_term - terms.laplace_term;
  return terms;
}

}  // namespace slt
