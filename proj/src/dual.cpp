#include "fluxsat/dual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace fluxsat {

namespace {

double pow_int_or_real(double base, double e) {
  if (e == std::floor(e) && e >= 0.0 && e <= 32.0) {
    double r = 1.0, b = base;
    for (int k = static_cast<int>(e); k > 0; k >>= 1) {
      if (k & 1) r *= b;
      b *= b;
    }
    return r;
  }
  return std::pow(base, e);
}

}  // namespace

double DualProfile::dual_mass() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s * deta();
}

void validate(const DualProfile& d) {
  if (d.n() < 3) fail(ErrorCode::InvalidGrid, "dual profile needs at least 3 cells");
  if (!(d.M > 0.0)) fail(ErrorCode::ZeroMass, "dual mass interval must be positive");
  if (!(d.m == 0.0 || d.m >= 1.0)) fail(ErrorCode::BadExponent, "m must be 0 or >= 1");
  for (size_t j = 0; j < d.v.size(); ++j)
    if (!(d.v[j] > 0.0) || !std::isfinite(d.v[j]))
      fail(ErrorCode::NegativeDensity, "dual cell " + std::to_string(j) + " must be positive",
           static_cast<long>(j));
}

DualProfile to_dual(const ModelSpec& spec, const Profile& p, int n_eta) {
  validate(spec, p);
  if (n_eta < 3) fail(ErrorCode::InvalidGrid, "n_eta must be >= 3");

  const int n = p.grid.n;
  int lo = 0, hi = n - 1;
  while (lo < n && p.u[static_cast<size_t>(lo)] <= u_floor) ++lo;
  while (hi >= 0 && p.u[static_cast<size_t>(hi)] <= u_floor) --hi;
  if (lo > hi) fail(ErrorCode::EmptySupport, "profile is vacuum");
  for (int i = lo; i <= hi; ++i) {
    if (p.u[static_cast<size_t>(i)] <= u_floor) {
      int run = 0;
      while (i + run <= hi && p.u[static_cast<size_t>(i + run)] <= u_floor) ++run;
      if (run > 1)
        fail(ErrorCode::DisconnectedSupport, "vacuum gap inside the support at cell " +
                                                 std::to_string(i), i);
      fail(ErrorCode::InteriorVacuum, "interior cell " + std::to_string(i) + " is vacuum", i);
    }
  }

  const double dx = p.grid.dx;
  const int ns = hi - lo + 1;
  std::vector<double> cdf(static_cast<size_t>(ns) + 1, 0.0);
  for (int k = 0; k < ns; ++k)
    cdf[static_cast<size_t>(k) + 1] = cdf[static_cast<size_t>(k)] +
                                      p.u[static_cast<size_t>(lo + k)] * dx;
  const double mass = cdf[static_cast<size_t>(ns)];
  if (!(mass > 0.0)) fail(ErrorCode::ZeroMass, "profile carries no mass");

  const double m_eff = spec.kind == ModelKind::Rhe ? 1.0 : spec.m;
  DualProfile d;
  d.scale = DualScale{spec.nu * m_eff / (spec.c * spec.c), spec.nu * m_eff / spec.c};
  d.M = mass / d.scale.eta_factor;
  d.m = spec.m;
  d.a_left = p.grid.left_edge(lo);
  d.t = p.t / d.scale.time_factor;
  d.v.resize(static_cast<size_t>(n_eta));

  int cell = 0;
  for (int j = 0; j < n_eta; ++j) {
    const double target = (j + 0.5) * mass / n_eta;  // unscaled mass coordinate
    while (cell + 1 < ns && cdf[static_cast<size_t>(cell) + 1] < target) ++cell;
    d.v[static_cast<size_t>(j)] = 1.0 / p.u[static_cast<size_t>(lo + cell)];
  }
  return d;
}

Profile from_dual(const DualProfile& d, const Grid& grid) {
  validate(d);
  validate(grid);
  Profile p = make_profile(grid, d.t * d.scale.time_factor);

  const double deta = d.deta();
  const double ef = d.scale.eta_factor;
  double xl = d.a_left;
  int cell = 0;
  for (int j = 0; j < d.n(); ++j) {
    const double width = ef * d.v[static_cast<size_t>(j)] * deta;
    const double xr = xl + width;
    const double density = 1.0 / d.v[static_cast<size_t>(j)];
    // Deposit [xl, xr) x density conservatively onto the grid.
    while (cell < grid.n && grid.right_edge() > xl) {
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
    xl = xr;
  }
  return p;
}

DualEvolveResult dual_evolve(const DualProfile& d0, double t_end, double eps,
                             const DualOptions& opts) {
  validate(d0);
  if (!(eps > 0.0 && eps <= 1e-2)) fail(ErrorCode::ConfigError, "eps must lie in (0, 1e-2]");
  if (!(t_end > d0.t)) fail(ErrorCode::ConfigError, "t_end must exceed the initial time");
  if (!(opts.cfl > 0.0 && opts.cfl < 1.0)) fail(ErrorCode::ConfigError, "cfl must be in (0,1)");

  const int n = d0.n();
  const double deta = d0.deta();
  const double p_exp = 4.0 + 2.0 * d0.m;
  const double bflux = 1.0 - std::cbrt(eps);
  const double v0_max = *std::max_element(d0.v.begin(), d0.v.end());
  const double contact_cap =
      std::min(opts.blowup_cap, opts.contact_coef * std::max(v0_max, 1.0) *
                                    std::pow(deta, -1.0 / (d0.m + 1.0)));

  DualEvolveResult res;
  res.snapshots.push_back(d0);
  DualProfile d = d0;
  std::vector<double> flux(static_cast<size_t>(n) + 1);
  std::vector<double> v_next(d.v.size());

  long k_record = 1;
  const double t0 = d0.t;
  while (d.t < t_end - 1e-15 * std::max(1.0, t_end)) {
    double v_min = d.v[0], v_max = d.v[0];
    for (double x : d.v) {
      v_min = std::min(v_min, x);
      v_max = std::max(v_max, x);
    }
    if (v_max >= contact_cap) {
      res.contact_time = d.t;
      break;
    }
    const double diff = std::max(1.0, pow_int_or_real(1.0 / v_min, 2.0 + d0.m)) + eps;
    const double dt_stable = opts.cfl * std::min(deta, deta * deta / (2.0 * diff));
    const double next_stop = std::min(t0 + k_record * opts.record_every, t_end);
    const double dt = std::min(dt_stable, next_stop - d.t);

    flux[0] = -bflux;
    flux[static_cast<size_t>(n)] = bflux;
    for (int j = 0; j + 1 < n; ++j) {
      const double xi = (d.v[static_cast<size_t>(j) + 1] - d.v[static_cast<size_t>(j)]) / deta;
      const double z = 0.5 * (d.v[static_cast<size_t>(j)] + d.v[static_cast<size_t>(j) + 1]);
      flux[static_cast<size_t>(j) + 1] =
          xi / std::sqrt(pow_int_or_real(z, p_exp) + xi * xi) + eps * xi;
    }
    const double lam = dt / deta;
    for (int j = 0; j < n; ++j) {
      const double v = d.v[static_cast<size_t>(j)] +
                       lam * (flux[static_cast<size_t>(j) + 1] - flux[static_cast<size_t>(j)]);
      if (!(v > 0.0))
        fail(ErrorCode::CflViolation, "dual value became nonpositive at cell " +
                                          std::to_string(j), j);
      v_next[static_cast<size_t>(j)] = v;
    }
    d.v.swap(v_next);
    d.t += dt;
    d.a_left -= d.scale.eta_factor * bflux * dt;
    if (d.t >= next_stop - 1e-12 * std::max(1.0, next_stop)) {
      d.t = next_stop;
      res.snapshots.push_back(d);
      while (t0 + k_record * opts.record_every <= d.t + 1e-12 * std::max(1.0, d.t)) ++k_record;
    }
  }
  if (res.snapshots.back().t < d.t) res.snapshots.push_back(d);
  res.final = d;
  return res;
}

double default_slope_threshold(double deta) { return 50.0 / std::sqrt(deta); }

std::vector<double> singular_set(const DualProfile& d, double slope_threshold) {
  validate(d);
  const double deta = d.deta();
  std::vector<double> coords;
  int run_start = -1;
  double best_slope = 0.0, best_eta = 0.0;
  for (int j = 0; j + 1 < d.n(); ++j) {
    const double slope = std::abs(d.v[static_cast<size_t>(j) + 1] - d.v[static_cast<size_t>(j)]) / deta;
    if (slope > slope_threshold) {
      const double eta = (j + 1) * deta;
      if (run_start < 0) {
        run_start = j;
        best_slope = slope;
        best_eta = eta;
      } else if (slope > best_slope) {
        best_slope = slope;
        best_eta = eta;
      }
    } else if (run_start >= 0) {
      coords.push_back(best_eta);
      run_start = -1;
    }
  }
  if (run_start >= 0) coords.push_back(best_eta);
  return coords;
}

void write_dual_csv(const DualProfile& d, const std::string& csv_path,
                    const std::string& json_path) {
  std::ofstream out(csv_path);
  if (!out) fail(ErrorCode::ConfigError, "cannot open " + csv_path + " for writing");
  out << "eta,v\n";
  char buf[128];
  for (int j = 0; j < d.n(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", d.eta(j), d.v[static_cast<size_t>(j)]);
    out << buf;
  }
  nlohmann::json side;
  side["M"] = d.M;
  side["a_left"] = d.a_left;
  side["t"] = d.t;
  side["scale"] = {{"time_factor", d.scale.time_factor}, {"eta_factor", d.scale.eta_factor}};
  side["m"] = d.m;
  side["singular"] = d.singular;
  std::ofstream js(json_path);
  if (!js) fail(ErrorCode::ConfigError, "cannot open " + json_path + " for writing");
  js << side.dump(2) << "\n";
}

}  // namespace fluxsat
