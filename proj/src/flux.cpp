#include "fluxsat/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fluxsat {

double flux_a(const ModelSpec& spec, double z, double xi) {
  if (z < 0.0) fail(ErrorCode::NegativeDensity, "flux_a needs z >= 0");
  const double beta = spec.nu / spec.c;
  if (spec.kind == ModelKind::Rhe) {
    if (z <= u_floor) return 0.0;  // |a| <= c z forces the vacuum limit
    return spec.nu * z * xi / std::sqrt(z * z + beta * beta * xi * xi);
  }
  return spec.nu * z * xi / std::sqrt(1.0 + beta * beta * xi * xi);
}

double flux_b(const ModelSpec& spec, double z, double xi) {
  if (z <= u_floor) fail(ErrorCode::VacuumDensity, "flux_b needs z > u_floor");
  return flux_a(spec, z, xi) / z;
}

double flux_h(const ModelSpec& spec, double z, double xi) {
  return flux_a(spec, z, xi) * xi;
}

double lagrangian_f(const ModelSpec& spec, double z, double xi) {
  if (z < 0.0) fail(ErrorCode::NegativeDensity, "lagrangian_f needs z >= 0");
  const double beta = spec.nu / spec.c;
  const double scale = spec.c * spec.c / spec.nu;
  if (spec.kind == ModelKind::Rhe)
    return scale * z * std::sqrt(z * z + beta * beta * xi * xi);
  return scale * z * std::sqrt(1.0 + beta * beta * xi * xi);
}

double cost_k(double z, double c) {
  if (std::abs(z) > c) return std::numeric_limits<double>::infinity();
  const double r = z / c;
  return c * c * (1.0 - std::sqrt(1.0 - r * r));
}

double cost_kstar(double xi, double c) {
  const double r = xi / c;
  return c * c * (std::sqrt(1.0 + r * r) - 1.0);
}

double stable_dt(const ModelSpec& spec, const Profile& p, double cfl) {
  validate(spec, p);
  if (p.u.empty()) fail(ErrorCode::EmptyProfile, "stable_dt needs cells");
  if (!(cfl > 0.0 && cfl < 1.0)) fail(ErrorCode::ConfigError, "cfl must be in (0,1)");
  const double dx = p.grid.dx;
  const double hyperbolic = dx / spec.c;
  double d_max;
  if (spec.kind == ModelKind::Rhe) {
    d_max = spec.nu;
  } else {
    const double u_max = *std::max_element(p.u.begin(), p.u.end());
    d_max = spec.nu * spec.m * std::pow(u_max, spec.m);
  }
  const double diffusive =
      d_max > 0.0 ? dx * dx / (2.0 * d_max) : std::numeric_limits<double>::infinity();
  return cfl * std::min(hyperbolic, diffusive);
}

}  // namespace fluxsat
