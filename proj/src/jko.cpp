#include "fluxsat/jko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluxsat/flux.hpp"

namespace fluxsat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConeMargin = 1e-12;

double total_mass(const Profile& p) {
  double s = 0.0;
  for (double v : p.u) s += v;
  return s * p.grid.dx;
}

void validate_config(const JkoConfig& cfg) {
  if (!(cfg.h > 0.0)) fail(ErrorCode::ConfigError, "h must be > 0");
  if (cfg.n_q < 16) fail(ErrorCode::ConfigError, "n_q must be >= 16");
  if (cfg.entropy == Entropy::Tsallis && !(cfg.m > 0.0))
    fail(ErrorCode::BadExponent, "Tsallis entropy needs m > 0");
  if (!(cfg.grad_tol > 0.0) || cfg.max_inner_iters < 1)
    fail(ErrorCode::ConfigError, "bad optimizer controls");
}

double entropy_density(double qprime, const JkoConfig& cfg, double mass) {
  if (cfg.entropy == Entropy::Boltzmann) return -std::log(qprime) - 1.0;
  return std::pow(mass, cfg.m) * std::pow(qprime, -cfg.m) / cfg.m;
}

double entropy_density_deriv(double qprime, const JkoConfig& cfg, double mass) {
  if (cfg.entropy == Entropy::Boltzmann) return -1.0 / qprime;
  return -std::pow(mass, cfg.m) * std::pow(qprime, -cfg.m - 1.0);
}

}  // namespace

QuantileFn quantiles(const Profile& p, int n_q) {
  validate(p.grid);
  if (n_q < 1) fail(ErrorCode::ConfigError, "n_q must be >= 1");
  const int n = p.grid.n;
  std::vector<double> cdf(static_cast<size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i)
    cdf[static_cast<size_t>(i) + 1] =
        cdf[static_cast<size_t>(i)] + std::max(p.u[static_cast<size_t>(i)], 0.0) * p.grid.dx;
  const double mass = cdf[static_cast<size_t>(n)];
  if (!(mass > 0.0)) fail(ErrorCode::ZeroMass, "profile carries no mass");

  QuantileFn qf;
  qf.q.resize(static_cast<size_t>(n_q));
  int cell = 0;
  for (int j = 0; j < n_q; ++j) {
    const double target = mass * (j + 1.0) / (n_q + 1.0);
    while (cell + 1 < n && cdf[static_cast<size_t>(cell) + 1] < target) ++cell;
    const double u = p.u[static_cast<size_t>(cell)];
    double x = p.grid.left_edge(cell);
    if (u > 0.0) x += (target - cdf[static_cast<size_t>(cell)]) / u;
    qf.q[static_cast<size_t>(j)] = x;
  }
  return qf;
}

double transport_cost(const QuantileFn& q0, const QuantileFn& q1, double h, double c) {
  if (q0.n() != q1.n()) fail(ErrorCode::GridMismatch, "quantile grids differ");
  if (!(h > 0.0) || !(c > 0.0)) fail(ErrorCode::NonPositiveConstant, "need h, c > 0");
  double sum = 0.0;
  for (int j = 0; j < q0.n(); ++j) {
    const double z = (q0.q[static_cast<size_t>(j)] - q1.q[static_cast<size_t>(j)]) / h;
    if (std::abs(z) > c) return kInf;
    sum += cost_k(z, c);
  }
  return sum / q0.n();
}

double jko_entropy(const QuantileFn& q, const JkoConfig& cfg, double mass) {
  const double ds = q.ds();
  double s = 0.0;
  for (int j = 0; j + 1 < q.n(); ++j) {
    const double gap = q.q[static_cast<size_t>(j) + 1] - q.q[static_cast<size_t>(j)];
    if (!(gap > 0.0)) return kInf;
    s += entropy_density(gap / ds, cfg, mass);
  }
  return s * ds;
}

double jko_objective(const std::vector<double>& Q, const std::vector<double>& Qprev,
                     const JkoConfig& cfg, double c, double mass) {
  const int n = static_cast<int>(Q.size());
  const double ds = 1.0 / (n + 1);
  double transport = 0.0;
  for (int j = 0; j < n; ++j) {
    const double z = (Qprev[static_cast<size_t>(j)] - Q[static_cast<size_t>(j)]) / cfg.h;
    if (std::abs(z) > c) return kInf;
    transport += cost_k(z, c);
  }
  transport /= n;
  double entropy = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    const double gap = Q[static_cast<size_t>(j) + 1] - Q[static_cast<size_t>(j)];
    if (!(gap > 0.0)) return kInf;
    entropy += entropy_density(gap / ds, cfg, mass);
  }
  return cfg.h * transport + entropy * ds;
}

std::vector<double> jko_gradient(const std::vector<double>& Q,
                                 const std::vector<double>& Qprev, const JkoConfig& cfg,
                                 double c, double mass) {
  const int n = static_cast<int>(Q.size());
  const double ds = 1.0 / (n + 1);
  std::vector<double> g(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const double z = (Qprev[static_cast<size_t>(j)] - Q[static_cast<size_t>(j)]) / cfg.h;
    const double r = z / c;
    const double kprime = z / std::sqrt(std::max(1.0 - r * r, 1e-300));
    g[static_cast<size_t>(j)] = -kprime / n;
  }
  for (int j = 0; j + 1 < n; ++j) {
    const double qprime = (Q[static_cast<size_t>(j) + 1] - Q[static_cast<size_t>(j)]) / ds;
    const double fd = entropy_density_deriv(qprime, cfg, mass);
    g[static_cast<size_t>(j)] -= fd;
    g[static_cast<size_t>(j) + 1] += fd;
  }
  return g;
}

void project_monotone_box(std::vector<double>& Q, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
  const int n = static_cast<int>(Q.size());
  // Pool-adjacent-violators with unit weights.
  std::vector<double> level(static_cast<size_t>(n));
  std::vector<int> count(static_cast<size_t>(n));
  int top = 0;
  for (int i = 0; i < n; ++i) {
    level[static_cast<size_t>(top)] = Q[static_cast<size_t>(i)];
    count[static_cast<size_t>(top)] = 1;
    ++top;
    while (top > 1 && level[static_cast<size_t>(top) - 2] >= level[static_cast<size_t>(top) - 1]) {
      const double merged =
          (level[static_cast<size_t>(top) - 2] * count[static_cast<size_t>(top) - 2] +
           level[static_cast<size_t>(top) - 1] * count[static_cast<size_t>(top) - 1]) /
          (count[static_cast<size_t>(top) - 2] + count[static_cast<size_t>(top) - 1]);
      count[static_cast<size_t>(top) - 2] += count[static_cast<size_t>(top) - 1];
      level[static_cast<size_t>(top) - 2] = merged;
      --top;
    }
  }
  int i = 0;
  for (int b = 0; b < top; ++b)
    for (int k = 0; k < count[static_cast<size_t>(b)]; ++k)
      Q[static_cast<size_t>(i++)] = level[static_cast<size_t>(b)];
  // Clip into the (isotone) box.
  for (int j = 0; j < n; ++j)
    Q[static_cast<size_t>(j)] =
        std::min(std::max(Q[static_cast<size_t>(j)], lo[static_cast<size_t>(j)]),
                 hi[static_cast<size_t>(j)]);
}

Profile profile_from_quantiles(const QuantileFn& q, double mass, const Grid& grid, double t) {
  validate(grid);
  if (q.n() < 2) fail(ErrorCode::ConfigError, "need at least 2 quantile nodes");
  const int n = q.n();
  const double chunk = mass * q.ds();  // mass per rendered interval
  std::vector<double> brk(static_cast<size_t>(n) + 2);
  brk[0] = q.q[0] - (q.q[1] - q.q[0]);
  for (int j = 0; j < n; ++j) brk[static_cast<size_t>(j) + 1] = q.q[static_cast<size_t>(j)];
  brk[static_cast<size_t>(n) + 1] =
      q.q[static_cast<size_t>(n) - 1] + (q.q[static_cast<size_t>(n) - 1] - q.q[static_cast<size_t>(n) - 2]);

  if (brk.front() < grid.left_edge(0) - 1e-12 || brk.back() > grid.right_edge() + 1e-12)
    fail(ErrorCode::BoundaryTouched, "quantile support leaves the target grid");

  Profile p = make_profile(grid, t);
  int cell = 0;
  for (int j = 0; j + 1 < static_cast<int>(brk.size()); ++j) {
    const double xl = brk[static_cast<size_t>(j)], xr = brk[static_cast<size_t>(j) + 1];
    const double width = xr - xl;
    if (!(width > 0.0)) fail(ErrorCode::ConfigError, "quantiles are not strictly increasing");
    const double density = chunk / width;
    while (cell < grid.n) {
      const double cl = grid.left_edge(cell), cr = grid.left_edge(cell + 1);
      if (cr <= xl) {
        ++cell;
        continue;
      }
      if (cl >= xr) break;
      const double overlap = std::min(cr, xr) - std::max(cl, xl);
      if (overlap > 0.0) p.u[static_cast<size_t>(cell)] += density * overlap / grid.dx;
      if (cr >= xr) break;
      ++cell;
    }
  }
  return p;
}

namespace {

struct InnerResult {
  std::vector<double> Q;
  double max_disp = 0.0;
};

InnerResult minimize_step(const std::vector<double>& Qprev, const JkoConfig& cfg, double c,
                          double mass) {
  const int n = static_cast<int>(Qprev.size());
  const double reach = c * cfg.h - kConeMargin;
  std::vector<double> lo(Qprev), hi(Qprev);
  for (int j = 0; j < n; ++j) {
    lo[static_cast<size_t>(j)] -= reach;
    hi[static_cast<size_t>(j)] += reach;
  }

  std::vector<double> Q = Qprev;
  double J = jko_objective(Q, Qprev, cfg, c, mass);
  double alpha = cfg.h;  // scale-free enough: displacements live on the c h scale
  std::vector<double> trial(Q.size());
  bool converged = false;
  for (int it = 0; it < cfg.max_inner_iters; ++it) {
    std::vector<double> g = jko_gradient(Q, Qprev, cfg, c, mass);
    double J_new = kInf;
    for (int bt = 0; bt < 60; ++bt) {
      for (int j = 0; j < n; ++j)
        trial[static_cast<size_t>(j)] = Q[static_cast<size_t>(j)] - alpha * g[static_cast<size_t>(j)];
      project_monotone_box(trial, lo, hi);
      J_new = jko_objective(trial, Qprev, cfg, c, mass);
      if (J_new < J - 1e-14 * std::max(1.0, std::abs(J))) break;
      alpha *= 0.5;
    }
    if (!(J_new < J)) {
      // No descent direction left at line-search resolution: measure optimality.
      double pg = 0.0;
      for (int j = 0; j < n; ++j)
        pg = std::max(pg, std::abs(trial[static_cast<size_t>(j)] - Q[static_cast<size_t>(j)]) / alpha);
      if (pg <= cfg.grad_tol) {
        converged = true;
        break;
      }
      fail(ErrorCode::OptimizerDiverged, "line search stalled above grad_tol");
    }
    double pg = 0.0;
    for (int j = 0; j < n; ++j)
      pg = std::max(pg, std::abs(trial[static_cast<size_t>(j)] - Q[static_cast<size_t>(j)]) / alpha);
    Q.swap(trial);
    J = J_new;
    if (pg <= cfg.grad_tol) {
      converged = true;
      break;
    }
    alpha *= 2.0;
  }
  if (!converged) fail(ErrorCode::OptimizerDiverged, "inner iterations exhausted");

  InnerResult res;
  res.Q = std::move(Q);
  for (int j = 0; j < n; ++j)
    res.max_disp = std::max(res.max_disp,
                            std::abs(res.Q[static_cast<size_t>(j)] - Qprev[static_cast<size_t>(j)]));
  return res;
}

}  // namespace

Profile jko_step(const Profile& p, const JkoConfig& cfg, const ModelSpec& spec) {
  validate(spec, p);
  validate_config(cfg);
  QuantileFn q = quantiles(p, cfg.n_q);
  const double M = total_mass(p);
  InnerResult r = minimize_step(q.q, cfg, spec.c, M);
  QuantileFn qn;
  qn.q = std::move(r.Q);
  return profile_from_quantiles(qn, M, p.grid, p.t + cfg.h);
}

Trajectory jko_evolve(const Profile& p0, const JkoConfig& cfg, int n_steps,
                      const ModelSpec& spec) {
  return jko_evolve_detailed(p0, cfg, n_steps, spec).trajectory;
}

JkoRun jko_evolve_detailed(const Profile& p0, const JkoConfig& cfg, int n_steps,
                           const ModelSpec& spec) {
  validate(spec, p0);
  validate_config(cfg);
  if (n_steps < 0) fail(ErrorCode::ConfigError, "n_steps must be >= 0");

  JkoRun run;
  run.trajectory.spec = spec;
  run.trajectory.snapshots.push_back(p0);
  if (n_steps == 0) return run;

  QuantileFn q = quantiles(p0, cfg.n_q);
  const double M = total_mass(p0);
  run.entropy.push_back(jko_entropy(q, cfg, M));
  for (int step_i = 1; step_i <= n_steps; ++step_i) {
    InnerResult r = minimize_step(q.q, cfg, spec.c, M);
    q.q = std::move(r.Q);
    run.max_displacement.push_back(r.max_disp);
    run.entropy.push_back(jko_entropy(q, cfg, M));
    run.trajectory.snapshots.push_back(
        profile_from_quantiles(q, M, p0.grid, p0.t + step_i * cfg.h));
  }
  return run;
}

}  // namespace fluxsat
