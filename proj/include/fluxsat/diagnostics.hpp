#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fluxsat/solver.hpp"

namespace fluxsat {

using BarrierFn = std::function<double(double t, double x)>;

double mass(const Profile& p);

struct Jump {
  int face;        // between cells face and face+1
  double x;        // face position
  double size;     // |u_{i+1} - u_i|
};

struct SupportInfo {
  int left_cell = 0;
  int right_cell = 0;
  double left_pos = 0.0;   // sub-cell: u crossing u_floor, linearly interpolated
  double right_pos = 0.0;
  std::vector<Jump> jumps;
};

/// Outermost cells above u_floor plus one-cell differences exceeding
/// jump_threshold * max(u). Throws EmptySupport on a vacuum profile.
SupportInfo support_and_jumps(const Profile& p, double jump_threshold = 0.25);

struct FrontReport {
  std::vector<double> times;
  std::vector<double> left_pos, right_pos;
  std::vector<double> left_jump, right_jump;            // interface jump sizes
  std::map<double, std::vector<double>> jump_sizes;     // t -> interior+interface jumps
  std::vector<double> left_speed, right_speed;          // sliding LSQ slopes
  std::vector<double> speed_times;                      // window-center times
  std::vector<double> rh_left, rh_right;                // |speed -/+ c| while the jump persists
  bool left_jump_persists = true;
  bool right_jump_persists = true;
};

/// Interface kinematics over sliding windows of `window`+1 snapshots.
FrontReport front_speed(const Trajectory& tr, int window, double jump_threshold = 0.25);

std::string front_report_json(const FrontReport& fr);

struct ComparisonReport {
  double max_lower_violation = 0.0;  // max (lower - u)+
  double max_upper_violation = 0.0;  // max (u - upper)+
  bool pass = false;
};

/// Barriers are averaged per cell (3-point Gauss) so steep interfaces compare
/// fairly against cell means.
ComparisonReport check_comparison(const BarrierFn& lower, const Trajectory& tr,
                                  const BarrierFn& upper, double tol);

/// First snapshot time at which either support endpoint drifted by more than
/// cells_tol cells; +infinity if the support never moved.
double measure_waiting_time(const Trajectory& tr, int cells_tol = 2);

double l1_distance(const Profile& a, const Profile& b);

}  // namespace fluxsat
