#pragma once

#include <string>
#include <vector>

#include "fluxsat/errors.hpp"

namespace fluxsat {

/// Densities at or below this value are treated as exact vacuum everywhere
/// (the RHE flux ratio is 0/0 at u = 0).
inline constexpr double u_floor = 1e-12;

enum class ModelKind { Rhe, Flpme };

/// Which equation is being solved plus its constants.
///   Rhe:   u_t = nu ( u u_x / sqrt(u^2 + (nu/c)^2 u_x^2) )_x        (m = 0)
///   Flpme: u_t = nu ( u (u^m)_x / sqrt(1 + (nu/c)^2 (u^m)_x^2) )_x (m >= 1)
struct ModelSpec {
  ModelKind kind = ModelKind::Rhe;
  double m = 0.0;
  double nu = 1.0;
  double c = 1.0;

  /// Exponent entering the dual equation v_t = (v_eta / sqrt(v^{4+2m} + v_eta^2))_eta.
  double dual_exponent() const { return 4.0 + 2.0 * m; }
  /// Coefficient of the unscaled dual flux (nu for RHE, nu*m for FLPME).
  double dual_coefficient() const { return kind == ModelKind::Rhe ? nu : nu * m; }
};

ModelSpec make_rhe(double nu, double c);
ModelSpec make_flpme(double m, double nu, double c);

/// Uniform 1D grid; cell i covers [x0 + i dx, x0 + (i+1) dx].
struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  int n = 0;

  double center(int i) const { return x0 + (i + 0.5) * dx; }
  double left_edge(int i) const { return x0 + i * dx; }
  double right_edge() const { return x0 + n * dx; }
  bool operator==(const Grid&) const = default;
};

/// Non-negative cell-averaged density with a timestamp.
struct Profile {
  Grid grid;
  std::vector<double> u;
  double t = 0.0;
};

Profile make_profile(const Grid& grid, double t = 0.0);

void validate(const ModelSpec& spec);
void validate(const Grid& grid);
void validate(const ModelSpec& spec, const Profile& p);

/// Constants (nu~, c~) governing u~(t,x) = K u(Tt, Lx):
///   nu~ = nu T / (K^m L^2),   nu^2 / (c^2 L^2 K^{2m}) = nu~^2 / c~^2.
/// Multiplicative in (K, L, T); identity at K = L = T = 1. m is untouched.
ModelSpec rescale(const ModelSpec& spec, double K, double L, double T);

/// CSV with header `x,u`, one row per cell center, 17 significant digits.
void write_profile_csv(const Profile& p, const std::string& path);
Profile read_profile_csv(const std::string& path, double t = 0.0);

}  // namespace fluxsat
