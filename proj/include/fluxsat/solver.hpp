#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fluxsat/core.hpp"

namespace fluxsat {

enum class Limiter { None, Minmod };

/// Ghost-cell density supplied as a function of (t, x); used for exact-solution
/// inflow. Sides without a provider keep the vacuum-buffer contract.
using GhostFn = std::function<double(double t, double x)>;

struct SolverOptions {
  double cfl = 0.4;
  Limiter limiter = Limiter::Minmod;
  double epsilon_visc = 0.0;  // optional eps*u_xx regularization
  double record_every = 0.1;
  GhostFn dirichlet_left;
  GhostFn dirichlet_right;
};

struct Trajectory {
  ModelSpec spec;
  std::vector<Profile> snapshots;
};

/// One conservative forward-Euler step of u_t = a(u, w_x)_x (+ eps u_xx):
///   u_i' = u_i + (dt/dx) (F_{i+1/2} - F_{i-1/2}),
///   F = flux_a(z_face, (w_{i+1} - w_i)/dx),  w = u (RHE) or u^m (FLPME),
/// z_face taken from the donor cell selected by sign(xi_face), optionally
/// minmod-reconstructed. Cells at or below u_floor are exact vacuum for the
/// stencil. Requires dt <= stable_dt and a 2-cell vacuum buffer at any side
/// without Dirichlet data.
Profile step(const ModelSpec& spec, const Profile& p, double dt, const SolverOptions& opts);

/// Forward-Euler loop with adaptive stable_dt; snapshots at multiples of
/// record_every (relative to p0.t) and at t_end.
Trajectory evolve(const ModelSpec& spec, const Profile& p0, double t_end,
                  const SolverOptions& opts);

/// One CSV per snapshot plus index.json {t, file, mass, support_left, support_right}.
void write_trajectory(const Trajectory& tr, const std::string& dir,
                      const std::string& stem = "u");

}  // namespace fluxsat
