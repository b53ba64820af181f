#include "slt/exponential.hpp"

#include <cmath>
#include <numbers>

#include "slt/parallel.hpp"

namespace slt {

void ExponentialSpec::value(double t, double* out) const {
  for (int a = 0; a < dim; ++a) out[a] = 0.0;
  switch (kind) {
    case ShiftKind::zero:
      break;
    case ShiftKind::constant:
      for (int a = 0; a < dim; ++a) out[a] = amplitude[a];
      break;
    case ShiftKind::step: {
      const auto& amp = t < 0.5 * horizon ? amplitude : amplitude_after;
      for (int a = 0; a < dim; ++a) out[a] = amp[a];
      break;
    }
    case ShiftKind::sinusoid: {
      const double s = std::sin(angular_frequency * t);
      for (int a = 0; a < dim; ++a) out[a] = amplitude[a] * s;
      break;
    }
  }
}

double ExponentialSpec::l2_sq_discrete(int steps) const {
  const double dt = horizon / steps;
  double acc = 0.0;
  double h[3];
  for (int k = 0; k < steps; ++k) {
    value(k * dt, h);
    for (int a = 0; a < dim; ++a) acc += h[a] * h[a];
  }
  return acc * dt;
}

ExponentialSpec ExponentialSpec::zero(int dim, double horizon) {
  ExponentialSpec s;
  s.dim = dim;
  s.horizon = horizon;
  return s;
}

ExponentialSpec ExponentialSpec::constant(const std::array<double, 3>& c,
                                          int dim, double horizon) {
  ExponentialSpec s;
  s.kind = ShiftKind::constant;
  s.dim = dim;
  s.horizon = horizon;
  s.amplitude = c;
  s.name = "constant";
  return s;
}

std::vector<ExponentialSpec> exponential_family(int count, int dim,
                                                double horizon) {
  if (count < 1) throw ConfigError("exponential family needs count >= 1");
  std::vector<ExponentialSpec> family;
  family.push_back(ExponentialSpec::zero(dim, horizon));

  const char* axis_names[3] = {"e1", "e2", "e3"};
  for (int a = 0; a < dim; ++a)
    for (double s : {1.0, -1.0}) {
      ExponentialSpec h = ExponentialSpec::zero(dim, horizon);
      h.kind = ShiftKind::constant;
      h.amplitude[a] = s;
      h.name = std::string("const:") + (s > 0 ? "+" : "-") + axis_names[a];
      family.push_back(h);
    }
  for (int a = 0; a < dim; ++a) {
    ExponentialSpec h = ExponentialSpec::zero(dim, horizon);
    h.kind = ShiftKind::step;
    h.amplitude[a] = 1.0;
    h.amplitude_after[a] = -1.0;
    h.name = std::string("step:") + axis_names[a];
    family.push_back(h);
  }
  for (double mult : {1.0, 2.0})
    for (int a = 0; a < dim; ++a) {
      ExponentialSpec h = ExponentialSpec::zero(dim, horizon);
      h.kind = ShiftKind::sinusoid;
      h.amplitude[a] = 1.0;
      h.angular_frequency = mult * 2.0 * std::numbers::pi / horizon;
      h.name = std::string(mult > 1.5 ? "sin2:" : "sin1:") + axis_names[a];
      family.push_back(h);
    }

  if (count > static_cast<int>(family.size()))
    throw ConfigError("exponential family catalog smaller than requested count");
  family.resize(count);
  return family;
}

namespace {

void check_mesh(const ExponentialSpec& h, const BrownianPath& path) {
  if (h.dim != path.dim || std::fabs(h.horizon - path.horizon) > 1e-12 * path.horizon)
    throw MeshError("shift h and Brownian path disagree on (dim, T)");
}

}  // namespace

double ito_integral(const ExponentialSpec& h, const BrownianPath& path, double t) {
  check_mesh(h, path);
  const int kt = t < 0.0 ? path.steps : mesh_index(path, t);
  const double dt = path.dt();
  double acc = 0.0;
  double hv[3];
  for (int k = 0; k < kt; ++k) {
    h.value(k * dt, hv);
    for (int a = 0; a < path.dim; ++a) acc += hv[a] * path.increment(k, a);
  }
  return acc;
}

double exponential_at(const ExponentialSpec& h, const BrownianPath& path, double t) {
  check_mesh(h, path);
  const int kt = mesh_index(path, t);
  const double dt = path.dt();
  double logf = 0.0;
  double hv[3];
  for (int k = 0; k < kt; ++k) {
    h.value(k * dt, hv);
    double h2 = 0.0;
    for (int a = 0; a < path.dim; ++a) {
      logf += hv[a] * path.increment(k, a);
      h2 += hv[a] * hv[a];
    }
    logf -= 0.5 * h2 * dt;
  }
  if (std::fabs(logf) > 700.0)
    throw RangeError("stochastic exponential overflows the double range");
  return std::exp(logf);
}

std::vector<double> exponential_series(const ExponentialSpec& h,
                                       const BrownianPath& path) {
  check_mesh(h, path);
  const double dt = path.dt();
  std::vector<double> f(path.steps + 1);
  double logf = 0.0;
  f[0] = 1.0;
  double hv[3];
  for (int k = 0; k < path.steps; ++k) {
    h.value(k * dt, hv);
    double h2 = 0.0;
    for (int a = 0; a < path.dim; ++a) {
      logf += hv[a] * path.increment(k, a);
      h2 += hv[a] * hv[a];
    }
    logf -= 0.5 * h2 * dt;
    if (std::fabs(logf) > 700.0)
      throw RangeError("stochastic exponential overflows the double range");
    f[k + 1] = std::exp(logf);
  }
  return f;
}

std::string adapted_kind_name(AdaptedKind y) {
  switch (y) {
    case AdaptedKind::brownian:
      return "brownian";
    case AdaptedKind::sin_brownian:
      return "sin_brownian";
    case AdaptedKind::deterministic_shift:
      return "deterministic_shift";
  }
  return "?";
}

BfIdentityReport verify_bf_identity(const ExponentialSpec& h, AdaptedKind y,
                                    int n_paths, int steps,
                                    std::uint64_t master_seed) {
  if (n_paths < 100)
    throw StatError("bf-identity check needs at least 100 paths for a CI");
  const int d = h.dim;
  const double dt = h.horizon / steps;

  struct BlockAcc {
    std::vector<double> sum_yf;  // steps*d, running E[Y_k F] numerator
    double lhs = 0.0, lhs2 = 0.0;
    double rhs = 0.0, rhs2 = 0.0;
  };
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = block_count(n_paths, kBlock);
  std::vector<BlockAcc> acc(blocks);

  parallel_blocks(n_paths, kBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    BlockAcc& A = acc[b];
    A.sum_yf.assign(static_cast<std::size_t>(steps) * d, 0.0);
    std::vector<double> yk(static_cast<std::size_t>(steps) * d);
    double hv[3], bsum[3];
    for (std::size_t p = lo; p < hi; ++p) {
      const BrownianPath path = BrownianPath::sample(master_seed, p, d, h.horizon, steps);
      // Y_k and the Ito sum in one pass; B is the pre-increment partial sum.
      for (int a = 0; a < d; ++a) bsum[a] = 0.0;
      double ito = 0.0;
      double time_quad = 0.0;
      for (int k = 0; k < steps; ++k) {
        h.value(k * dt, hv);
        for (int a = 0; a < d; ++a) {
          double yv = 0.0;
          switch (y) {
            case AdaptedKind::brownian:
              yv = bsum[a];
              break;
            case AdaptedKind::sin_brownian:
              yv = std::sin(bsum[a]);
              break;
            case AdaptedKind::deterministic_shift:
              yv = hv[a];
              break;
          }
          yk[static_cast<std::size_t>(k) * d + a] = yv;
          ito += yv * path.increment(k, a);
          time_quad += hv[a] * yv * dt;
          bsum[a] += path.increment(k, a);
        }
      }
      const double f = exponential_at(h, path, h.horizon);
      const double sl = ito * f;
      const double sr = time_quad * f;
      A.lhs += sl;
      A.lhs2 += sl * sl;
      A.rhs += sr;
      A.rhs2 += sr * sr;
      for (std::size_t i = 0; i < yk.size(); ++i) A.sum_yf[i] += yk[i] * f;
    }
  });

  // Deterministic fold in block order.
  std::vector<double> part_l(blocks), part_l2(blocks), part_r(blocks), part_r2(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    part_l[b] = acc[b].lhs;
    part_l2[b] = acc[b].lhs2;
    part_r[b] = acc[b].rhs;
    part_r2[b] = acc[b].rhs2;
  }
  const double M = n_paths;
  const double sum_l = pairwise_sum(part_l);
  const double sum_l2 = pairwise_sum(part_l2);
  const double sum_r = pairwise_sum(part_r);
  const double sum_r2 = pairwise_sum(part_r2);

  std::vector<double> mean_yf(static_cast<std::size_t>(steps) * d, 0.0);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t i = 0; i < mean_yf.size(); ++i) mean_yf[i] += acc[b].sum_yf[i];
  for (double& v : mean_yf) v /= M;

  BfIdentityReport rep;
  rep.n_paths = n_paths;
  rep.steps = steps;
  rep.lhs = sum_l / M;
  // Deterministic time quadrature of h . E[Y_s F].
  double rhs = 0.0;
  double hv[3];
  for (int k = 0; k < steps; ++k) {
    h.value(k * dt, hv);
    for (int a = 0; a < d; ++a) rhs += hv[a] * mean_yf[static_cast<std::size_t>(k) * d + a] * dt;
  }
  rep.rhs = rhs;
  const double var_l = std::max(0.0, (sum_l2 - M * rep.lhs * rep.lhs) / (M - 1.0));
  const double mean_r_paths = sum_r / M;
  const double var_r = std::max(0.0, (sum_r2 - M * mean_r_paths * mean_r_paths) / (M - 1.0));
  rep.se_lhs = std::sqrt(var_l / M);
  rep.se_rhs = std::sqrt(var_r / M);
  rep.threshold = 3.0 * std::sqrt(rep.se_lhs * rep.se_lhs + rep.se_rhs * rep.se_rhs) + dt;
  rep.pass = std::fabs(rep.lhs - rep.rhs) <= rep.threshold;
  return rep;
}

}  // namespace slt
