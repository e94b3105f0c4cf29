#include "fluxsat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fluxsat/flux.hpp"
#include "json.hpp"

namespace fluxsat {

namespace {

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

// u^m for the gradient surrogate; integer exponents stay off the pow path.
struct PowM {
  double m;
  int mi;
  bool is_int;
  explicit PowM(double m_) : m(m_), mi(static_cast<int>(m_)) {
    is_int = (m == std::floor(m)) && m >= 0.0 && m <= 16.0;
  }
  double operator()(double u) const {
    if (!is_int) return std::pow(u, m);
    double r = 1.0;
    double base = u;
    for (int e = mi; e > 0; e >>= 1) {
      if (e & 1) r *= base;
      base *= base;
    }
    return r;
  }
};

struct StepState {
  int lo = 0;          // support bounds after the step (u > u_floor)
  int hi = -1;
  double u_max = 0.0;  // includes ghost values
};

struct Workspace {
  std::vector<double> ub, wb;  // masked padded copies of u and w over the window
};

// One conservative update. Only cells in the active window are written; every
// face outside it sits between two vacuum cells and carries zero flux.
// `hint` bounds the support of u_in (support moves at most one cell per step).
StepState step_kernel(const ModelSpec& spec, const Grid& grid,
                      const std::vector<double>& u_in, double t, double dt,
                      const SolverOptions& opts, std::vector<double>& u_out,
                      Workspace& ws, const StepState* hint) {
  const int n = grid.n;
  const double dx = grid.dx;
  const bool rhe = spec.kind == ModelKind::Rhe;
  const PowM powm(rhe ? 1.0 : spec.m);

  int lo = hint ? std::max(0, hint->lo - 1) : 0;
  int hi = hint ? std::min(n - 1, hint->hi + 1) : n - 1;
  while (lo < n && u_in[static_cast<size_t>(lo)] <= u_floor) ++lo;
  while (hi >= 0 && u_in[static_cast<size_t>(hi)] <= u_floor) --hi;

  const bool has_left = static_cast<bool>(opts.dirichlet_left);
  const bool has_right = static_cast<bool>(opts.dirichlet_right);
  StepState st;
  if (lo > hi && !has_left && !has_right) {  // vacuum is a fixed point
    st.lo = n;
    st.hi = -1;
    return st;
  }
  if (!has_left && lo <= 1)
    fail(ErrorCode::BoundaryTouched, "support reached the left buffer");
  if (!has_right && hi >= n - 2)
    fail(ErrorCode::BoundaryTouched, "support reached the right buffer");

  const int wlo = has_left ? 0 : std::max(0, lo - 3);
  const int whi = has_right ? n - 1 : std::min(n - 1, hi + 3);

  double ug[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [side][distance-1]
  if (has_left) {
    ug[0][0] = std::max(0.0, opts.dirichlet_left(t, grid.center(-1)));
    ug[0][1] = std::max(0.0, opts.dirichlet_left(t, grid.center(-2)));
  }
  if (has_right) {
    ug[1][0] = std::max(0.0, opts.dirichlet_right(t, grid.center(n)));
    ug[1][1] = std::max(0.0, opts.dirichlet_right(t, grid.center(n + 1)));
  }

  // Padded masked buffers over cell range [wlo-2, whi+2].
  const int pad = 2;
  const int wn = whi - wlo + 1 + 2 * pad;
  if (static_cast<int>(ws.ub.size()) < wn) {
    ws.ub.resize(static_cast<size_t>(wn));
    ws.wb.resize(static_cast<size_t>(wn));
  }
  for (int k = 0; k < wn; ++k) {
    const int j = wlo - pad + k;
    double u;
    if (j < 0)
      u = (j == -1) ? ug[0][0] : ug[0][1];
    else if (j >= n)
      u = (j == n) ? ug[1][0] : ug[1][1];
    else {
      u = u_in[static_cast<size_t>(j)];
      if (u <= u_floor) u = 0.0;
    }
    ws.ub[static_cast<size_t>(k)] = u;
    ws.wb[static_cast<size_t>(k)] = rhe ? u : powm(u);
  }

  const bool use_minmod = opts.limiter == Limiter::Minmod;
  const double eps = opts.epsilon_visc;
  const double nu = spec.nu;
  const double beta2 = (nu / spec.c) * (nu / spec.c);
  const double lambda = dt / dx;
  const double* ub = ws.ub.data();
  const double* wb = ws.wb.data();

  double flux_left = 0.0;  // face (wlo-1)-1/2 is vacuum-vacuum (or unused cell)
  for (int i = wlo - 1; i <= whi; ++i) {
    const int k = i - (wlo - pad);
    const double uL = ub[k], uR = ub[k + 1];
    const double xi = (wb[k + 1] - wb[k]) / dx;
    double z;
    if (xi < 0.0) {
      z = uL;
      if (use_minmod) z += 0.5 * minmod(uL - ub[k - 1], uR - uL);
    } else if (xi > 0.0) {
      z = uR;
      if (use_minmod) z -= 0.5 * minmod(uR - uL, ub[k + 2] - uR);
    } else {
      z = 0.5 * (uL + uR);
    }
    double F;
    if (z <= u_floor) {
      F = 0.0;
    } else if (rhe) {
      F = nu * z * xi / std::sqrt(z * z + beta2 * xi * xi);
    } else {
      F = nu * z * xi / std::sqrt(1.0 + beta2 * xi * xi);
    }
    if (eps > 0.0) F += eps * (uR - uL) / dx;

    if (i >= wlo) {
      double v = u_in[static_cast<size_t>(i)] + lambda * (F - flux_left);
      if (v < 0.0) {
        if (v < -1e-13)
          fail(ErrorCode::CflViolation,
               "negative density after step at cell " + std::to_string(i), i);
        v = 0.0;
      }
      u_out[static_cast<size_t>(i)] = v;
    }
    flux_left = F;
  }

  st.lo = n;
  st.hi = -1;
  st.u_max = std::max(std::max(ug[0][0], ug[0][1]), std::max(ug[1][0], ug[1][1]));
  for (int i = wlo; i <= whi; ++i) {
    const double v = u_out[static_cast<size_t>(i)];
    if (v > u_floor) {
      if (i < st.lo) st.lo = i;
      if (i > st.hi) st.hi = i;
      if (v > st.u_max) st.u_max = v;
    }
  }
  return st;
}

double stable_dt_from(const ModelSpec& spec, double dx, double u_max, double cfl,
                      double eps_visc) {
  const double hyperbolic = dx / spec.c;
  double d_max = spec.kind == ModelKind::Rhe
                     ? spec.nu
                     : spec.nu * spec.m * std::pow(std::max(u_max, 0.0), spec.m);
  d_max += eps_visc;
  const double diffusive =
      d_max > 0.0 ? dx * dx / (2.0 * d_max) : std::numeric_limits<double>::infinity();
  return cfl * std::min(hyperbolic, diffusive);
}

void validate_options(const SolverOptions& opts) {
  if (!(opts.cfl > 0.0 && opts.cfl < 1.0)) fail(ErrorCode::ConfigError, "cfl must be in (0,1)");
  if (!(opts.epsilon_visc >= 0.0)) fail(ErrorCode::ConfigError, "epsilon_visc must be >= 0");
  if (!(opts.record_every > 0.0)) fail(ErrorCode::ConfigError, "record_every must be > 0");
}

}  // namespace

Profile step(const ModelSpec& spec, const Profile& p, double dt, const SolverOptions& opts) {
  validate(spec, p);
  validate_options(opts);
  if (!(dt > 0.0)) fail(ErrorCode::ConfigError, "dt must be > 0");
  double u_max = 0.0;
  for (double v : p.u) u_max = std::max(u_max, v);
  if (opts.dirichlet_left)
    u_max = std::max(u_max, opts.dirichlet_left(p.t, p.grid.center(-1)));
  if (opts.dirichlet_right)
    u_max = std::max(u_max, opts.dirichlet_right(p.t, p.grid.center(p.grid.n)));
  const double dt_max = stable_dt_from(spec, p.grid.dx, u_max, opts.cfl, opts.epsilon_visc);
  if (dt > dt_max * (1.0 + 1e-9)) fail(ErrorCode::CflViolation, "dt exceeds the stable step");

  Profile out;
  out.grid = p.grid;
  out.t = p.t + dt;
  out.u = p.u;
  Workspace ws;
  step_kernel(spec, p.grid, p.u, p.t, dt, opts, out.u, ws, nullptr);
  return out;
}

Trajectory evolve(const ModelSpec& spec, const Profile& p0, double t_end,
                  const SolverOptions& opts) {
  validate(spec, p0);
  validate_options(opts);
  if (!(t_end > p0.t)) fail(ErrorCode::ConfigError, "t_end must exceed the initial time");

  Trajectory tr;
  tr.spec = spec;
  tr.snapshots.push_back(p0);

  std::vector<double> u = p0.u;
  std::vector<double> u_next = u;  // non-window cells stay in sync across swaps
  Workspace ws;
  double t = p0.t;

  StepState st;
  st.lo = p0.grid.n;
  st.hi = -1;
  for (int i = 0; i < p0.grid.n; ++i) {
    const double v = u[static_cast<size_t>(i)];
    if (v > u_floor) {
      if (i < st.lo) st.lo = i;
      st.hi = i;
    }
    st.u_max = std::max(st.u_max, v);
  }

  long k_record = 1;
  const double t0 = p0.t;
  while (t < t_end - 1e-15 * std::max(1.0, t_end)) {
    const double next_stop = std::min(t0 + k_record * opts.record_every, t_end);
    double u_max = st.u_max;
    if (opts.dirichlet_left)
      u_max = std::max(u_max, opts.dirichlet_left(t, p0.grid.center(-1)));
    if (opts.dirichlet_right)
      u_max = std::max(u_max, opts.dirichlet_right(t, p0.grid.center(p0.grid.n)));
    const double dt_stable = stable_dt_from(spec, p0.grid.dx, u_max, opts.cfl, opts.epsilon_visc);
    const double dt = std::min(dt_stable, next_stop - t);
    st = step_kernel(spec, p0.grid, u, t, dt, opts, u_next, ws, &st);
    u.swap(u_next);
    t += dt;
    if (t >= next_stop - 1e-12 * std::max(1.0, next_stop)) {
      t = next_stop;
      Profile snap;
      snap.grid = p0.grid;
      snap.u = u;
      snap.t = t;
      tr.snapshots.push_back(std::move(snap));
      while (t0 + k_record * opts.record_every <= t + 1e-12 * std::max(1.0, t)) ++k_record;
    }
  }
  if (tr.snapshots.back().t < t_end) {
    Profile snap;
    snap.grid = p0.grid;
    snap.u = u;
    snap.t = t_end;
    tr.snapshots.push_back(std::move(snap));
  }
  return tr;
}

void write_trajectory(const Trajectory& tr, const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json index;
  index["model"] = {{"kind", tr.spec.kind == ModelKind::Rhe ? "rhe" : "flpme"},
                    {"m", tr.spec.m},
                    {"nu", tr.spec.nu},
                    {"c", tr.spec.c}};
  auto& snaps = index["snapshots"] = nlohmann::json::array();
  char name[64];
  for (size_t k = 0; k < tr.snapshots.size(); ++k) {
    const Profile& p = tr.snapshots[k];
    std::snprintf(name, sizeof(name), "%s_%04zu.csv", stem.c_str(), k);
    write_profile_csv(p, (fs::path(dir) / name).string());
    double mass = 0.0;
    int lo = -1, hi = -1;
    for (int i = 0; i < p.grid.n; ++i) {
      mass += p.u[static_cast<size_t>(i)];
      if (p.u[static_cast<size_t>(i)] > u_floor) {
        if (lo < 0) lo = i;
        hi = i;
      }
    }
    mass *= p.grid.dx;
    snaps.push_back({{"t", p.t},
                     {"file", name},
                     {"mass", mass},
                     {"support_left", lo >= 0 ? p.grid.center(lo) : 0.0},
                     {"support_right", hi >= 0 ? p.grid.center(hi) : 0.0}});
  }
  std::ofstream out(fs::path(dir) / "index.json");
  out << index.dump(2) << "\n";
}

}  // namespace fluxsat
