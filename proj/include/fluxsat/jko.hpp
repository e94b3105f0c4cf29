#pragma once

#include <vector>

#include "fluxsat/core.hpp"
#include "fluxsat/solver.hpp"

namespace fluxsat {

/// Monotone sampled inverse CDF: Q[j] solves integral_{-inf}^{Q} u dx = s_j M
/// at s_j = (j+1)/(n_q+1).
struct QuantileFn {
  std::vector<double> q;
  int n() const { return static_cast<int>(q.size()); }
  double s(int j) const { return static_cast<double>(j + 1) / (n() + 1); }
  double ds() const { return 1.0 / (n() + 1); }
};

QuantileFn quantiles(const Profile& p, int n_q);

/// Mean over s of k((Q0-Q1)/h) with the relativistic cost; +infinity when any
/// displacement leaves the light cone |Q0-Q1| <= c h.
double transport_cost(const QuantileFn& q0, const QuantileFn& q1, double h, double c);

enum class Entropy { Boltzmann, Tsallis };

struct JkoConfig {
  double h = 0.01;
  Entropy entropy = Entropy::Boltzmann;
  double m = 1.0;  // Tsallis exponent (ignored for Boltzmann)
  int n_q = 256;
  int max_inner_iters = 30000;
  double grad_tol = 1e-7;
};

/// Internal energy integral(F(u))dx expressed through quantile gaps
/// (rho(Q(s)) Q'(s) = M), dropping Q-independent constants:
///   Boltzmann: ds sum(-ln q' - 1);  Tsallis: ds sum(M^m q'^{-m} / m).
double jko_entropy(const QuantileFn& q, const JkoConfig& cfg, double mass);

/// Full step objective h * mean_s k((Qprev - Q)/h) + entropy; convex in Q.
double jko_objective(const std::vector<double>& Q, const std::vector<double>& Qprev,
                     const JkoConfig& cfg, double c, double mass);
std::vector<double> jko_gradient(const std::vector<double>& Q,
                                 const std::vector<double>& Qprev, const JkoConfig& cfg,
                                 double c, double mass);

/// Euclidean projection onto {monotone} intersect {lo <= Q <= hi} for isotone
/// bounds: pool-adjacent-violators followed by componentwise clipping.
void project_monotone_box(std::vector<double>& Q, const std::vector<double>& lo,
                          const std::vector<double>& hi);

/// Renders the measure carried by Q (mass ds per gap, linear tail
/// extrapolation) as piecewise-constant cell averages; conserves mass exactly.
Profile profile_from_quantiles(const QuantileFn& q, double mass, const Grid& grid, double t);

/// One minimizing-movement step: minimizes the convex objective over monotone Q
/// inside the light cone |Q - Qprev| <= c h - 1e-12 (projected gradient descent
/// with backtracking), then renders the minimizer on p's grid.
Profile jko_step(const Profile& p, const JkoConfig& cfg, const ModelSpec& spec);

struct JkoRun {
  Trajectory trajectory;
  std::vector<double> entropy;           // one value per state, descent holds exactly
  std::vector<double> max_displacement;  // per step, <= c h
};

Trajectory jko_evolve(const Profile& p0, const JkoConfig& cfg, int n_steps,
                      const ModelSpec& spec);
JkoRun jko_evolve_detailed(const Profile& p0, const JkoConfig& cfg, int n_steps,
                           const ModelSpec& spec);

}  // namespace fluxsat
