#pragma once

#include "fluxsat/core.hpp"

namespace fluxsat {

/// Saturated flux a(z, xi). xi is the model's gradient surrogate: u_x for RHE,
/// (u^m)_x for FLPME. Satisfies |a| <= c z, odd and non-decreasing in xi.
///   Rhe:   nu z xi / sqrt(z^2 + (nu/c)^2 xi^2), 0 for z <= u_floor
///   Flpme: nu z xi / sqrt(1  + (nu/c)^2 xi^2)
double flux_a(const ModelSpec& spec, double z, double xi);

/// b(z, xi) = a(z, xi) / z, |b| <= c. Throws VacuumDensity for z <= u_floor.
double flux_b(const ModelSpec& spec, double z, double xi);

/// h(z, xi) = a(z, xi) * xi >= 0.
double flux_h(const ModelSpec& spec, double z, double xi);

/// Lagrangian with a = df/dxi:
///   Rhe:   (c^2/nu) z sqrt(z^2 + (nu/c)^2 xi^2)   (z sqrt(z^2+xi^2) at nu=c=1)
///   Flpme: (c^2/nu) z sqrt(1  + (nu/c)^2 xi^2)
double lagrangian_f(const ModelSpec& spec, double z, double xi);

/// Relativistic transport cost k(z) = c^2 (1 - sqrt(1 - z^2/c^2)) for |z| <= c,
/// +infinity beyond the light cone.
double cost_k(double z, double c);

/// Dual cost k*(xi) = c^2 (sqrt(1 + xi^2/c^2) - 1).
double cost_kstar(double xi, double c);

/// Stable explicit step: cfl * min(dx/c, dx^2/(2 D_max)) with D_max = nu (RHE)
/// or nu m u_max^m (FLPME; the diffusive bound is vacuous on a vacuum profile).
double stable_dt(const ModelSpec& spec, const Profile& p, double cfl);

}  // namespace fluxsat
