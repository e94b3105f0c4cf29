#include "fluxsat/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "fluxsat/flux.hpp"

namespace fluxsat {

double TravelingWave::operator()(double t, double x) const {
  const double xi = x - sigma * t;
  const double s = sigma * (xi0 - xi);
  if (s < 0.0) return 0.0;
  const double root = nu * std::sqrt(1.0 - (sigma / c) * (sigma / c));
  return std::pow(s / root, 1.0 / m);
}

double TravelingWave::wm_slope() const {
  return -sigma / (nu * std::sqrt(1.0 - (sigma / c) * (sigma / c)));
}

TravelingWave traveling_wave(const ModelSpec& spec, double sigma, double xi0) {
  validate(spec);
  if (spec.kind != ModelKind::Flpme)
    fail(ErrorCode::BadExponent, "traveling waves exist only for FLPME");
  if (!(std::abs(sigma) < spec.c))
    fail(ErrorCode::SigmaOutOfRange, "need |sigma| < c");
  return TravelingWave{spec.m, spec.nu, spec.c, sigma, xi0};
}

double jump_extinction_objective(const ModelSpec& spec, double alpha, double b, double d,
                                 double sigma) {
  if (!(sigma > 0.0 && sigma < spec.c)) fail(ErrorCode::SigmaOutOfRange, "sigma in (0,c)");
  const double am = std::pow(alpha, spec.m);
  const double num = am * spec.nu * std::sqrt(1.0 - (sigma / spec.c) * (sigma / spec.c)) / sigma +
                     b - d;
  return num / (spec.c - sigma);
}

double jump_extinction_bound(const ModelSpec& spec, double alpha, double b, double d) {
  validate(spec);
  if (!(alpha > 0.0)) fail(ErrorCode::NonPositiveConstant, "alpha must be > 0");
  if (!(d <= b)) fail(ErrorCode::ConfigError, "jump location d must not exceed b");

  const int n_scan = 2000;
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  for (int i = 0; i < n_scan; ++i) {
    const double s = spec.c * (i + 0.5) / n_scan;
    const double val = jump_extinction_objective(spec, alpha, b, d, s);
    if (val < best) {
      best = val;
      best_i = i;
    }
  }
  // Golden-section refinement around the best scan cell.
  double lo = spec.c * std::max(0.5, best_i - 0.5) / n_scan;
  double hi = spec.c * std::min(n_scan - 0.5, best_i + 1.5) / n_scan;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = jump_extinction_objective(spec, alpha, b, d, x1);
  double f2 = jump_extinction_objective(spec, alpha, b, d, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = jump_extinction_objective(spec, alpha, b, d, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = jump_extinction_objective(spec, alpha, b, d, x2);
    }
  }
  return std::min(best, std::min(f1, f2));
}

double waiting_time_bound(double m, double k_tilde, double a, double b) {
  if (!(b > a)) fail(ErrorCode::ConfigError, "need b > a");
  if (!(k_tilde > 0.0)) fail(ErrorCode::NonPositiveConstant, "k_tilde must be > 0");
  if (!(m >= 1.0)) fail(ErrorCode::BadExponent, "waiting time needs m >= 1");
  const double w = b - a;
  return 1.0 / (2.0 * (2.0 + m) * k_tilde * w * w);
}

double supnorm_bound(double M, double eps, double c, double t) {
  if (!(M > 0.0 && eps > 0.0 && c > 0.0) || t < 0.0)
    fail(ErrorCode::NonPositiveConstant, "supnorm_bound needs positive arguments");
  return M / (2.0 * (eps + c * t));
}

bool check_vinequality(const std::function<double(double)>& v, double k, double lo,
                       double hi, int n_samples) {
  if (!(hi > lo) || n_samples < 1) fail(ErrorCode::ConfigError, "bad sampling interval");
  const double h = (hi - lo) * 1e-6;
  for (int i = 0; i < n_samples; ++i) {
    const double x = lo + (i + 0.5) * (hi - lo) / n_samples;
    const double vx = v(x);
    const double dv = (v(x + h) - v(x - h)) / (2.0 * h);
    if (vx > 1e-12) {
      if (dv * dv / vx > 2.0 * k + 1e-8) return false;
    } else {
      if (dv * dv > 2.0 * k * std::max(vx, 0.0) + 1e-8) return false;
    }
  }
  return true;
}

BarrierSide barrier_side(BarrierFamily family) {
  switch (family) {
    case BarrierFamily::TravelingWave: return BarrierSide::Super;
    case BarrierFamily::WaitingSuper: return BarrierSide::Super;
    case BarrierFamily::WaitingSub: return BarrierSide::Sub;
    case BarrierFamily::RheExpandingSub: return BarrierSide::Sub;
    case BarrierFamily::RheTwoBumpSub: return BarrierSide::Sub;
    case BarrierFamily::VerticalSuper: return BarrierSide::Super;
  }
  fail(ErrorCode::ConfigError, "unknown barrier family");
}

namespace {

double require_param(const BarrierSpec& bs, const std::string& name) {
  auto it = bs.params.find(name);
  if (it == bs.params.end()) fail(ErrorCode::ConfigError, "missing barrier parameter " + name);
  return it->second;
}

double param_or(const BarrierSpec& bs, const std::string& name, double fallback) {
  auto it = bs.params.find(name);
  return it == bs.params.end() ? fallback : it->second;
}

bool has_param(const BarrierSpec& bs, const std::string& name) {
  return bs.params.count(name) > 0;
}

// Expanding RHE sub-solution of radius R0 (one bump, two-bump handled via Theta).
double expanding_sub(double alpha0, double gamma0, double beta1, double beta2, double nu,
                     double c, double R0, double t, double x) {
  const double r = R0 + c * t;
  if (std::abs(x) >= r) return 0.0;
  return std::exp(-beta1 * t - beta2 * t * t) *
         (alpha0 * (c / nu) * std::sqrt(r * r - x * x) + gamma0);
}

double two_bump_theta(double l, double kappa, double c, double t, double x) {
  const double r = kappa + c * t;
  double theta = 0.0;
  if (x > -l - r && x <= std::min(0.0, -l + r)) {
    const double arg = r * r - (x + l) * (x + l);
    theta += std::sqrt(std::max(arg, 0.0));
  }
  if (x > std::max(0.0, l - r) && x < l + r) {
    const double arg = r * r - (x - l) * (x - l);
    theta += std::sqrt(std::max(arg, 0.0));
  }
  return theta;
}

// du/dt - (a(u, w_x))_x by centered differences; negative for sub-solutions.
double discrete_residual(const BarrierFn& fn, const ModelSpec& spec, double t, double x,
                         double dx, double dt) {
  const double ut = (fn(t + dt, x) - fn(t - dt, x)) / (2.0 * dt);
  auto w = [&](double xx) {
    const double u = fn(t, xx);
    return spec.kind == ModelKind::Rhe ? u : std::pow(u, spec.m);
  };
  auto face = [&](double xl, double xr) {
    const double z = 0.5 * (fn(t, xl) + fn(t, xr));
    const double xi = (w(xr) - w(xl)) / (xr - xl);
    return flux_a(spec, std::max(z, 0.0), xi);
  };
  const double Fp = face(x, x + dx);
  const double Fm = face(x - dx, x);
  return ut - (Fp - Fm) / dx;
}

BarrierFn build_barrier(const BarrierSpec& bs, const ModelSpec& spec, bool allow_fit);

double max_sub_residual(const BarrierFn& fn, const ModelSpec& spec,
                        const std::vector<std::pair<double, double>>& samples) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [t, x] : samples) {
    worst = std::max(worst, discrete_residual(fn, spec, t, x, 1e-4, 1e-6));
  }
  return worst;
}

std::vector<std::pair<double, double>> sub_samples(const BarrierSpec& bs,
                                                   const ModelSpec& spec, double t_max) {
  std::vector<std::pair<double, double>> samples;
  const int nt = 8, nx = 25;
  for (int it = 1; it <= nt; ++it) {
    const double t = t_max * it / nt;
    if (bs.family == BarrierFamily::RheExpandingSub) {
      const double r = require_param(bs, "R0") + spec.c * t;
      for (int ix = 0; ix < nx; ++ix) {
        const double x = -0.85 * r + 1.7 * r * ix / (nx - 1);
        samples.emplace_back(t, x);
      }
    } else {  // RheTwoBumpSub: sample inside each bump, away from edges and seam
      const double l = require_param(bs, "l");
      const double r = require_param(bs, "kappa") + spec.c * t;
      for (int ix = 0; ix < nx; ++ix) {
        const double off = -0.85 * r + 1.7 * r * ix / (nx - 1);
        for (double center : {-l, l}) {
          const double x = center + off;
          if (two_bump_theta(l, require_param(bs, "kappa"), spec.c, t, x) > 1e-8 &&
              std::abs(x) > 0.05 * r)
            samples.emplace_back(t, x);
        }
      }
    }
  }
  return samples;
}

BarrierFn build_barrier(const BarrierSpec& bs, const ModelSpec& spec, bool allow_fit) {
  validate(spec);
  switch (bs.family) {
    case BarrierFamily::TravelingWave: {
      return traveling_wave(spec, require_param(bs, "sigma"), require_param(bs, "xi0"));
    }
    case BarrierFamily::WaitingSuper:
    case BarrierFamily::WaitingSub: {
      if (spec.kind != ModelKind::Flpme)
        fail(ErrorCode::BadExponent, "waiting barriers are FLPME constructions");
      const double k_tilde = require_param(bs, "k_tilde");
      const double delta = require_param(bs, "delta");
      if (!(k_tilde > 0.0 && delta > 0.0))
        fail(ErrorCode::NonPositiveConstant, "k_tilde, delta must be > 0");
      const double k = param_or(bs, "k", quartic_witness_k(k_tilde, delta));
      return waiting_barrier(quartic_witness(k_tilde, delta), k, spec.m,
                             barrier_side(bs.family));
    }
    case BarrierFamily::RheExpandingSub: {
      if (spec.kind != ModelKind::Rhe)
        fail(ErrorCode::BadExponent, "expanding sub-solution is an RHE construction");
      const double alpha0 = require_param(bs, "alpha0");
      const double gamma0 = param_or(bs, "gamma0", 0.0);
      const double R0 = require_param(bs, "R0");
      if (!(R0 > 0.0 && alpha0 > 0.0 && gamma0 >= 0.0))
        fail(ErrorCode::NonPositiveConstant, "need R0, alpha0 > 0 and gamma0 >= 0");
      double beta1, beta2;
      if (has_param(bs, "beta1") && has_param(bs, "beta2")) {
        beta1 = require_param(bs, "beta1");
        beta2 = require_param(bs, "beta2");
      } else if (allow_fit) {
        beta1 = beta2 = fit_sub_barrier_betas(bs, spec);
      } else {
        fail(ErrorCode::ConfigError, "betas required");
      }
      const double nu = spec.nu, c = spec.c;
      return [=](double t, double x) {
        return expanding_sub(alpha0, gamma0, beta1, beta2, nu, c, R0, t, x);
      };
    }
    case BarrierFamily::RheTwoBumpSub: {
      if (spec.kind != ModelKind::Rhe)
        fail(ErrorCode::BadExponent, "two-bump sub-solution is an RHE construction");
      const double alpha0 = require_param(bs, "alpha0");
      const double l = require_param(bs, "l");
      const double kappa = require_param(bs, "kappa");
      if (!(alpha0 > 0.0 && l > 0.0 && kappa > 0.0))
        fail(ErrorCode::NonPositiveConstant, "need alpha0, l, kappa > 0");
      if (!(kappa < l)) fail(ErrorCode::ConfigError, "two-bump profile needs kappa < l");
      double beta1, beta2;
      if (has_param(bs, "beta1") && has_param(bs, "beta2")) {
        beta1 = require_param(bs, "beta1");
        beta2 = require_param(bs, "beta2");
      } else if (allow_fit) {
        beta1 = beta2 = fit_sub_barrier_betas(bs, spec);
      } else {
        fail(ErrorCode::ConfigError, "betas required");
      }
      const double nu = spec.nu, c = spec.c;
      return [=](double t, double x) {
        return std::exp(-beta1 * t - beta2 * t * t) * alpha0 * (c / nu) *
               two_bump_theta(l, kappa, c, t, x);
      };
    }
    case BarrierFamily::VerticalSuper: {
      if (spec.kind != ModelKind::Rhe)
        fail(ErrorCode::BadExponent, "vertical-contact super-solution is an RHE construction");
      const double A0 = require_param(bs, "A0");
      const double R0 = require_param(bs, "R0");
      const double alpha = require_param(bs, "alpha");
      if (!(A0 > 0.0 && R0 > 0.0 && alpha > 0.0))
        fail(ErrorCode::NonPositiveConstant, "need A0, R0, alpha > 0");
      const double c = spec.c;
      return [=](double t, double x) {
        const double r = R0 + c * t;
        if (std::abs(x) >= r) return 0.0;
        return A0 * std::pow(r * r - x * x, alpha);
      };
    }
  }
  fail(ErrorCode::ConfigError, "unknown barrier family");
}

}  // namespace

std::function<double(double)> quartic_witness(double k_tilde, double delta) {
  return [k_tilde, delta](double x) {
    const double a = delta - x, b = x + delta;
    return k_tilde * a * a * b * b;
  };
}

double quartic_witness_k(double k_tilde, double delta) {
  return 2.0 * k_tilde * (2.0 * delta) * (2.0 * delta);
}

double waiting_blowup_time(double m, double k) { return 1.0 / ((2.0 + m) * k); }

BarrierFn waiting_barrier(const std::function<double(double)>& v, double k, double m,
                          BarrierSide side) {
  if (!(k > 0.0)) fail(ErrorCode::NonPositiveConstant, "k must be > 0");
  if (!(m >= 1.0)) fail(ErrorCode::BadExponent, "waiting barriers need m >= 1");
  if (side == BarrierSide::Super) {
    const double t_blow = waiting_blowup_time(m, k);
    return [=](double t, double x) {
      if (t >= t_blow)
        fail(ErrorCode::TimeBeyondBlowup, "WaitingSuper is valid only for t < 1/((2+m)k)");
      const double vx = std::max(v(x), 0.0);
      if (vx == 0.0) return 0.0;
      return std::pow(vx / (1.0 - (2.0 + m) * k * t), 1.0 / m);
    };
  }
  return [=](double t, double x) {
    const double vx = std::max(v(x), 0.0);
    if (vx == 0.0) return 0.0;
    return std::pow(vx / ((2.0 + m) * k * t + 1.0), 1.0 / m);
  };
}

double fit_sub_barrier_betas(const BarrierSpec& bs, const ModelSpec& spec, double t_max) {
  if (bs.family != BarrierFamily::RheExpandingSub && bs.family != BarrierFamily::RheTwoBumpSub)
    fail(ErrorCode::ConfigError, "beta fitting applies to the RHE sub-solution families");
  auto samples = sub_samples(bs, spec, t_max);
  auto with_betas = [&](double s) {
    BarrierSpec bb = bs;
    bb.params["beta1"] = s;
    bb.params["beta2"] = s;
    return build_barrier(bb, spec, false);
  };
  const double tol = 1e-6;
  double hi = 1.0;
  int guard = 0;
  while (max_sub_residual(with_betas(hi), spec, samples) > tol) {
    hi *= 2.0;
    if (++guard > 40) fail(ErrorCode::ConfigError, "beta fitting did not converge");
  }
  double lo = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (max_sub_residual(with_betas(mid), spec, samples) > tol)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

BarrierFn make_barrier(const BarrierSpec& bs, const ModelSpec& spec) {
  return build_barrier(bs, spec, true);
}

}  // namespace fluxsat
