#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slt/brownian.hpp"

namespace slt {

enum class ShiftKind { zero, constant, step, sinusoid };

// Deterministic h in L2([0,T]; R^d) driving a stochastic exponential
//   F_t = exp( int_0^t h.dB - 1/2 int_0^t |h|^2 ds ).
// The catalog kinds are: zero, constant c, a step switching sign at T/2,
// and an axis-aligned sinusoid.
struct ExponentialSpec {
  ShiftKind kind = ShiftKind::zero;
  int dim = 1;
  double horizon = 1.0;
  std::array<double, 3> amplitude{};        // constant / step first half / sinusoid
  std::array<double, 3> amplitude_after{};  // step second half
  double angular_frequency = 0.0;           // sinusoid
  std::string name = "zero";

  void value(double t, double* out) const;
  /// Discrete int_0^T |h|^2 dt on an N-step mesh (left endpoints).
  double l2_sq_discrete(int steps) const;

  static ExponentialSpec zero(int dim, double horizon);
  static ExponentialSpec constant(const std::array<double, 3>& c, int dim,
                                  double horizon);
};

/// Deterministic finite stand-in for the space of stochastic exponentials:
/// zero, +-unit constants per axis, steps switching at T/2, sinusoids at
/// two frequencies, in that order. Throws ConfigError if count exceeds the
/// catalog.
std::vector<ExponentialSpec> exponential_family(int count, int dim, double horizon);

/// Left-endpoint Ito sum of h against the path up to mesh time t (default:
/// the full horizon). Throws MeshError if h and the path disagree on
/// (dim, T).
double ito_integral(const ExponentialSpec& h, const BrownianPath& path,
                    double t = -1.0);

/// F_t for a mesh time t. Throws RangeError when |log F| > 700 and
/// MeshError for off-mesh t.
double exponential_at(const ExponentialSpec& h, const BrownianPath& path, double t);

/// F at every mesh time t_0..t_N (size steps+1).
std::vector<double> exponential_series(const ExponentialSpec& h,
                                       const BrownianPath& path);

enum class AdaptedKind { brownian, sin_brownian, deterministic_shift };
std::string adapted_kind_name(AdaptedKind y);

// Monte-Carlo check of E[ int_0^t Y.dB F ] = int_0^t h(s).E[Y_s F] ds for an
// adapted catalog process Y.
struct BfIdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double se_lhs = 0.0;
  double se_rhs = 0.0;
  double threshold = 0.0;  // 3*sqrt(se_lhs^2+se_rhs^2) + dt
  bool pass = false;
  int n_paths = 0;
  int steps = 0;
};

/// Throws StatError when n_paths < 100.
BfIdentityReport verify_bf_identity(const ExponentialSpec& h, AdaptedKind y,
                                    int n_paths, int steps,
                                    std::uint64_t master_seed);

}  // namespace slt
