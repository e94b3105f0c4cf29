#pragma once

#include <functional>
#include <map>
#include <string>

#include "fluxsat/core.hpp"
#include "fluxsat/diagnostics.hpp"

namespace fluxsat {

/// FLPME traveling wave u(x - sigma t):
///   u(xi) = (sigma (xi0 - xi) / (nu sqrt(1 - (sigma/c)^2)))^{1/m} when
///   sigma (xi0 - xi) >= 0, zero elsewhere.
struct TravelingWave {
  double m, nu, c, sigma, xi0;
  double operator()(double t, double x) const;
  /// Constant gradient of u^m on the positive branch: -sigma/(nu sqrt(1-(sigma/c)^2)).
  double wm_slope() const;
};

TravelingWave traveling_wave(const ModelSpec& spec, double sigma, double xi0);

/// Value of (alpha^m nu sqrt(1-(sigma/c)^2)/sigma + b - d)/(c - sigma) at a
/// fixed sigma in (0, c).
double jump_extinction_objective(const ModelSpec& spec, double alpha, double b, double d,
                                 double sigma);

/// Upper bound t(sigma) on the life span of a jump at d inside support ending
/// at b, minimized over sigma in (0, c) (coarse scan + golden section).
double jump_extinction_bound(const ModelSpec& spec, double alpha, double b, double d);

/// Waiting-time bound 1/(2 (2+m) k~ (b-a)^2) for data with u0 <= (k~ (x-a)^2 (b-x)^2)^{1/m}.
double waiting_time_bound(double m, double k_tilde, double a, double b);

/// Sup-norm decay bound M/(2 (eps + c t)) outside the inner cone.
double supnorm_bound(double M, double eps, double c, double t);

/// Checks v'(x)^2 / v(x) <= 2k on n_samples interior points of [lo, hi]
/// (central finite differences), with 1e-8 slack.
bool check_vinequality(const std::function<double(double)>& v, double k, double lo,
                       double hi, int n_samples);

enum class BarrierFamily {
  TravelingWave,
  WaitingSuper,
  WaitingSub,
  RheExpandingSub,
  RheTwoBumpSub,
  VerticalSuper,
};

enum class BarrierSide { Sub, Super };

BarrierSide barrier_side(BarrierFamily family);

/// Parameters by name, per family:
///   TravelingWave:   sigma, xi0
///   WaitingSuper/Sub: k_tilde, delta [, k]   (quartic witness k~ (d-x)^2 (x+d)^2;
///                     k defaults to 2 k~ (2 delta)^2)
///   RheExpandingSub: alpha0, gamma0, R0 [, beta1, beta2]
///   RheTwoBumpSub:   alpha0, l, kappa [, beta1, beta2]
///   VerticalSuper:   A0, R0, alpha
/// Missing betas are fitted by bisection to the smallest values giving a
/// nonpositive discrete sub-solution residual on a sample grid.
struct BarrierSpec {
  BarrierFamily family;
  std::map<std::string, double> params;
};

BarrierFn make_barrier(const BarrierSpec& bs, const ModelSpec& spec);

/// Waiting-time barrier with a caller-supplied witness v (v'' <= k assumed).
BarrierFn waiting_barrier(const std::function<double(double)>& v, double k, double m,
                          BarrierSide side);

/// The default quartic witness v(x) = k~ (delta-x)^2 (x+delta)^2 and its
/// curvature bound k = 2 k~ (2 delta)^2.
std::function<double(double)> quartic_witness(double k_tilde, double delta);
double quartic_witness_k(double k_tilde, double delta);

/// Blow-up time 1/((2+m) k) of the WaitingSuper time factor.
double waiting_blowup_time(double m, double k);

/// Smallest beta1 = beta2 making the family an entropy sub-solution on a
/// sampled grid (discrete residual <= 0); used when betas are not supplied.
double fit_sub_barrier_betas(const BarrierSpec& bs, const ModelSpec& spec,
                             double t_max = 0.5);

}  // namespace fluxsat
