#include "fluxsat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace fluxsat {

double mass(const Profile& p) {
  double s = 0.0;
  for (double v : p.u) s += v;
  return s * p.grid.dx;
}

namespace {

// Position where u crosses u_floor next to the support edge, by linear
// interpolation between cell centers; pins speed estimates below one cell.
double edge_position(const Profile& p, int edge_cell, int outside_step) {
  const int j = edge_cell + outside_step;
  const double ue = p.u[static_cast<size_t>(edge_cell)];
  double uo = 0.0;
  if (j >= 0 && j < p.grid.n) uo = p.u[static_cast<size_t>(j)];
  if (uo > u_floor || ue <= u_floor) return p.grid.center(edge_cell);
  const double frac = (ue - u_floor) / std::max(ue - uo, 1e-300);
  return p.grid.center(edge_cell) + outside_step * frac * p.grid.dx;
}

// Least-squares slope of y against x.
double lsq_slope(const double* x, const double* y, int n) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

}  // namespace

SupportInfo support_and_jumps(const Profile& p, double jump_threshold) {
  const int n = p.grid.n;
  int lo = 0, hi = n - 1;
  while (lo < n && p.u[static_cast<size_t>(lo)] <= u_floor) ++lo;
  while (hi >= 0 && p.u[static_cast<size_t>(hi)] <= u_floor) --hi;
  if (lo > hi) fail(ErrorCode::EmptySupport, "profile is vacuum");

  SupportInfo info;
  info.left_cell = lo;
  info.right_cell = hi;
  info.left_pos = edge_position(p, lo, -1);
  info.right_pos = edge_position(p, hi, +1);

  const double u_max = *std::max_element(p.u.begin(), p.u.end());
  const double thresh = jump_threshold * u_max;
  for (int i = std::max(0, lo - 1); i <= std::min(n - 2, hi); ++i) {
    const double d = std::abs(p.u[static_cast<size_t>(i + 1)] - p.u[static_cast<size_t>(i)]);
    if (d > thresh) info.jumps.push_back({i, p.grid.left_edge(i + 1), d});
  }
  return info;
}

FrontReport front_speed(const Trajectory& tr, int window, double jump_threshold) {
  if (static_cast<int>(tr.snapshots.size()) < window + 1)
    fail(ErrorCode::TooFewSnapshots, "need at least window+1 snapshots");

  FrontReport fr;
  const double c = tr.spec.c;
  for (const Profile& p : tr.snapshots) {
    SupportInfo s = support_and_jumps(p, jump_threshold);
    fr.times.push_back(p.t);
    fr.left_pos.push_back(s.left_pos);
    fr.right_pos.push_back(s.right_pos);
    // Interface jumps: one-cell difference at the support edge.
    const double lj = p.u[static_cast<size_t>(s.left_cell)];
    const double rj = p.u[static_cast<size_t>(s.right_cell)];
    fr.left_jump.push_back(lj);
    fr.right_jump.push_back(rj);
    std::vector<double> sizes;
    for (const Jump& j : s.jumps) sizes.push_back(j.size);
    fr.jump_sizes[p.t] = std::move(sizes);
    const double u_max = *std::max_element(p.u.begin(), p.u.end());
    if (lj <= jump_threshold * u_max) fr.left_jump_persists = false;
    if (rj <= jump_threshold * u_max) fr.right_jump_persists = false;
  }

  const int m = static_cast<int>(fr.times.size());
  for (int k = 0; k + window < m; ++k) {
    const double sl = lsq_slope(&fr.times[static_cast<size_t>(k)],
                                &fr.left_pos[static_cast<size_t>(k)], window + 1);
    const double sr = lsq_slope(&fr.times[static_cast<size_t>(k)],
                                &fr.right_pos[static_cast<size_t>(k)], window + 1);
    fr.left_speed.push_back(sl);
    fr.right_speed.push_back(sr);
    fr.speed_times.push_back(0.5 * (fr.times[static_cast<size_t>(k)] +
                                    fr.times[static_cast<size_t>(k + window)]));
    // Rankine-Hugoniot residual applies while the interface jump persists
    // across the whole window.
    bool lp = true, rp = true;
    const double u_max0 = *std::max_element(tr.snapshots[static_cast<size_t>(k)].u.begin(),
                                            tr.snapshots[static_cast<size_t>(k)].u.end());
    for (int j = k; j <= k + window; ++j) {
      if (fr.left_jump[static_cast<size_t>(j)] <= jump_threshold * u_max0) lp = false;
      if (fr.right_jump[static_cast<size_t>(j)] <= jump_threshold * u_max0) rp = false;
    }
    fr.rh_left.push_back(lp ? std::abs(sl + c) : std::numeric_limits<double>::quiet_NaN());
    fr.rh_right.push_back(rp ? std::abs(sr - c) : std::numeric_limits<double>::quiet_NaN());
  }
  return fr;
}

std::string front_report_json(const FrontReport& fr) {
  nlohmann::json j;
  j["times"] = fr.times;
  j["left_pos"] = fr.left_pos;
  j["right_pos"] = fr.right_pos;
  j["left_jump"] = fr.left_jump;
  j["right_jump"] = fr.right_jump;
  j["speed_times"] = fr.speed_times;
  j["left_speed"] = fr.left_speed;
  j["right_speed"] = fr.right_speed;
  auto nan_to_null = [](const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) {
      if (std::isnan(x))
        a.push_back(nullptr);
      else
        a.push_back(x);
    }
    return a;
  };
  j["rh_left"] = nan_to_null(fr.rh_left);
  j["rh_right"] = nan_to_null(fr.rh_right);
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& [t, v] : fr.jump_sizes) sizes.push_back({{"t", t}, {"sizes", v}});
  j["jump_sizes"] = sizes;
  return j.dump(2);
}

ComparisonReport check_comparison(const BarrierFn& lower, const Trajectory& tr,
                                  const BarrierFn& upper, double tol) {
  ComparisonReport rep;
  // 3-point Gauss-Legendre nodes on [-1/2, 1/2].
  const double g = 0.5 * std::sqrt(3.0 / 5.0);
  const double nodes[3] = {-g, 0.0, g};
  const double wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  for (const Profile& p : tr.snapshots) {
    for (int i = 0; i < p.grid.n; ++i) {
      const double xc = p.grid.center(i);
      double lo = 0.0, hi = 0.0;
      for (int q = 0; q < 3; ++q) {
        const double x = xc + nodes[q] * p.grid.dx;
        lo += wts[q] * lower(p.t, x);
        hi += wts[q] * upper(p.t, x);
      }
      const double u = p.u[static_cast<size_t>(i)];
      rep.max_lower_violation = std::max(rep.max_lower_violation, lo - u);
      rep.max_upper_violation = std::max(rep.max_upper_violation, u - hi);
    }
  }
  rep.pass = rep.max_lower_violation <= tol && rep.max_upper_violation <= tol;
  return rep;
}

double measure_waiting_time(const Trajectory& tr, int cells_tol) {
  if (tr.snapshots.empty()) fail(ErrorCode::EmptySupport, "empty trajectory");
  SupportInfo s0 = support_and_jumps(tr.snapshots.front());
  for (size_t k = 1; k < tr.snapshots.size(); ++k) {
    SupportInfo s = support_and_jumps(tr.snapshots[k]);
    if (std::abs(s.left_cell - s0.left_cell) > cells_tol ||
        std::abs(s.right_cell - s0.right_cell) > cells_tol)
      return tr.snapshots[k].t;
  }
  return std::numeric_limits<double>::infinity();
}

double l1_distance(const Profile& a, const Profile& b) {
  if (!(a.grid == b.grid)) fail(ErrorCode::GridMismatch, "profiles live on different grids");
  double s = 0.0;
  for (size_t i = 0; i < a.u.size(); ++i) s += std::abs(a.u[i] - b.u[i]);
  return s * a.grid.dx;
}

}  // namespace fluxsat
