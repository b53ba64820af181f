#include "slt/drift.hpp"

#include <algorithm>
#include <cmath>

namespace slt {

namespace {

// Hat profile and its slope on [-1, 1].
inline double hat(double u) { return 1.0 - std::fabs(u); }
inline double sgn(double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); }

// Local cell coordinates of the cellular tiling: wraps x into [-L, L) and
// returns (s, t) in [-1, 1] relative to the containing cell center.
inline void cell_coords(double x, double y, double extent, int cells,
                        double& s, double& t) {
  const double period = 2.0 * extent;
  auto wrap = [&](double v) {
    double w = std::fmod(v + extent, period);
    if (w < 0.0) w += period;
    return w;  // in [0, 2L)
  };
  const double cw = period / cells;
  const double wx = wrap(x);
  const double wy = wrap(y);
  double cx = std::floor(wx / cw);
  double cy = std::floor(wy / cw);
  if (cx >= cells) cx = cells - 1;
  if (cy >= cells) cy = cells - 1;
  s = 2.0 * (wx - (cx + 0.5) * cw) / cw;
  t = 2.0 * (wy - (cy + 0.5) * cw) / cw;
}

}  // namespace

double cellular_stream(const DriftSpec& spec, double x, double y) {
  double s, t;
  cell_coords(x, y, spec.extent, spec.cells, s, t);
  const double cw = 2.0 * spec.extent / spec.cells;
  return 0.5 * cw * std::min(hat(s), hat(t));
}

std::array<double, 3> DriftSpec::eval(double t, const double* x) const {
  if (t < 0.0 || t > time_horizon())
    throw DomainError("drift evaluated outside [0, T]");
  std::array<double, 3> b{0.0, 0.0, 0.0};
  switch (kind) {
    case DriftKind::zero:
      break;
    case DriftKind::constant:
      for (int a = 0; a < dim; ++a) b[a] = constant[a];
      break;
    case DriftKind::linear:
      for (int a = 0; a < dim; ++a) {
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += matrix[a][c] * x[c];
        b[a] = s;
      }
      break;
    case DriftKind::rotation:
      b[0] = -x[1];
      b[1] = x[0];
      break;
    case DriftKind::shear:
      b[0] = shear_rate * x[1];
      break;
    case DriftKind::cellular: {
      double s, u;
      cell_coords(x[0], x[1], extent, cells, s, u);
      // Perp-gradient of the pyramid stream min(hat(s), hat(u)): one unit
      // vortex per cell, piecewise constant, tangent to cell edges,
      // divergence-free a.e.
      if (hat(s) > hat(u)) {
        b[0] = sgn(u);
        b[1] = 0.0;
      } else {
        b[0] = 0.0;
        b[1] = -sgn(s);
      }
      break;
    }
    case DriftKind::tabulated: {
      if (!table) throw CatalogError("tabulated drift without a table");
      sample(table->at_time(t), x, b.data());
      break;
    }
  }
  for (int a = 0; a < dim; ++a)
    if (!std::isfinite(b[a])) throw CatalogError("drift evaluation is not finite");
  return b;
}

bool DriftSpec::divergence_is_analytic() const {
  switch (kind) {
    case DriftKind::zero:
    case DriftKind::constant:
    case DriftKind::linear:
    case DriftKind::rotation:
    case DriftKind::shear:
      return true;
    default:
      return false;
  }
}

double DriftSpec::analytic_divergence() const {
  if (kind == DriftKind::linear) {
    double tr = 0.0;
    for (int a = 0; a < dim; ++a) tr += matrix[a][a];
    return tr;
  }
  return 0.0;
}

double DriftSpec::time_horizon() const {
  if (kind == DriftKind::tabulated && table && !table->is_static())
    return table->t0 + table->slice_dt * (static_cast<double>(table->slices.size()));
  return std::numeric_limits<double>::infinity();
}

void DriftSpec::validate() const {
  if (dim < 1 || dim > 3) throw CatalogError("drift dim must be 1..3");
  if (kind == DriftKind::rotation && dim != 2)
    throw CatalogError("rotation drift is 2-d");
  if (kind == DriftKind::shear && dim < 2)
    throw CatalogError("shear drift needs dim >= 2");
  if (kind == DriftKind::cellular) {
    if (dim != 2) throw CatalogError("cellular drift is 2-d");
    if (cells < 1) throw CatalogError("cellular drift needs at least one cell");
    if (!(extent > 0.0)) throw CatalogError("cellular drift needs a positive extent");
  }
  if (kind == DriftKind::tabulated && !table)
    throw CatalogError("tabulated drift without a table");
}

DriftSpec drift_catalog(const std::string& name, int dim, double extent) {
  DriftSpec s;
  s.dim = dim;
  s.name = name;
  s.extent = extent;
  if (name == "zero") {
    s.kind = DriftKind::zero;
  } else if (name == "constant") {
    s.kind = DriftKind::constant;
    s.constant = {0.5, -0.25, 0.125};
  } else if (name == "linear") {
    s.kind = DriftKind::linear;
    for (int a = 0; a < dim; ++a) s.matrix[a][a] = 1.0 / dim;  // trace 1
    s.growth_radius = 1.0;
  } else if (name == "rotation") {
    s.kind = DriftKind::rotation;
    s.growth_radius = 1.0;
  } else if (name == "shear") {
    s.kind = DriftKind::shear;
    s.growth_radius = 1.0;
  } else if (name == "cellular") {
    s.kind = DriftKind::cellular;
    s.cells = 4;
  } else {
    throw CatalogError("unknown drift catalog entry: " + name);
  }
  s.validate();
  return s;
}

std::vector<std::string> drift_catalog_names(int dim) {
  std::vector<std::string> names{"constant", "linear", "zero"};
  if (dim == 2) {
    names.push_back("cellular");
    names.push_back("rotation");
  }
  if (dim >= 2) names.push_back("shear");
  std::sort(names.begin(), names.end());
  return names;
}

VectorField sample_drift(const DriftSpec& spec, double t, const GridSpec& g) {
  VectorField out(g);
  double x[3];
  const std::size_t total = g.node_count();
  for (std::size_t i = 0; i < total; ++i) {
    g.node_position(i, x);
    const auto b = spec.eval(t, x);
    for (int a = 0; a < g.dim; ++a) out.comps[a][i] = b[a];
  }
  return out;
}

DivergenceField drift_divergence(const DriftSpec& spec, double t,
                                 const GridSpec& g) {
  DivergenceField out;
  if (spec.divergence_is_analytic()) {
    out.field = ScalarField(g, spec.analytic_divergence());
    out.sup_norm = std::fabs(spec.analytic_divergence());
  } else {
    out.field = divergence_centered(sample_drift(spec, t, g));
    out.sup_norm = max_abs(out.field.values);
  }
  out.field.time_tag = t;
  return out;
}

HypothesisReport validate_hypotheses(const DriftSpec& spec, const GridSpec& g,
                                     const std::vector<double>& times) {
  HypothesisReport r;
  r.con3_declared = spec.growth_radius > 0.0;
  r.growth_radius = spec.growth_radius;
  if (times.size() < 2) throw ConfigError("hypothesis check needs a time mesh");
  double integral = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const DivergenceField d = drift_divergence(spec, times[k], g);
    if (!std::isfinite(d.sup_norm)) finite = false;
    integral += d.sup_norm * (times[k + 1] - times[k]);
  }
  r.con2 = finite && std::isfinite(integral);
  r.div_sup_integral = integral;
  return r;
}

int SampledDrift::slice_index(double t) const {
  if (is_static()) return 0;
  const int m = static_cast<int>(std::floor((t - t0) / slice_dt));
  return std::clamp(m, 0, static_cast<int>(slices.size()) - 1);
}

double SampledDrift::div_sup_integral(double t) const {
  if (is_static()) return div_sup[0] * t;
  double acc = 0.0;
  for (std::size_t m = 0; m < slices.size(); ++m) {
    const double lo = t0 + m * slice_dt;
    if (lo >= t) break;
    acc += div_sup[m] * std::min(slice_dt, t - lo);
  }
  return acc;
}

double SampledDrift::max_component() const {
  double m = 0.0;
  for (const auto& s : slices)
    for (int a = 0; a < grid.dim; ++a) m = std::max(m, max_abs(s.comps[a]));
  return m;
}

SampledDrift make_sampled_drift(const DriftSpec& spec, const GridSpec& g,
                                const std::vector<double>& times) {
  SampledDrift out;
  out.grid = g;
  out.zero_drift = spec.kind == DriftKind::zero;
  std::vector<double> mesh = times;
  if (mesh.empty() || spec.time_horizon() == std::numeric_limits<double>::infinity())
    mesh = {0.0};
  if (mesh.size() > 1) {
    out.t0 = mesh.front();
    out.slice_dt = mesh[1] - mesh[0];
  }
  for (double t : mesh) {
    out.slices.push_back(sample_drift(spec, t, g));
    DivergenceField d = drift_divergence(spec, t, g);
    out.divs.push_back(std::move(d.field));
    out.div_sup.push_back(d.sup_norm);
  }
  return out;
}

}  // namespace slt
