#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluxsat/core.hpp"

namespace fluxsat {

/// Normalization factors connecting the unscaled dual problem to the common
/// form v_t = (v_eta/sqrt(v^{4+2m}+v_eta^2))_eta with unit boundary flux:
///   vbar(t, eta) = v(time_factor * t, eta_factor * eta),
///   time_factor = nu m^ / c^2,  eta_factor = nu m^ / c   (m^ = max(m,1)).
struct DualScale {
  double time_factor = 1.0;
  double eta_factor = 1.0;
};

/// v = 1/(u o phi) sampled on the normalized mass interval (0, M),
/// eta_j = (j+1/2) deta. Acts as the state of the dual solver.
struct DualProfile {
  double M = 0.0;              // normalized mass-interval length
  std::vector<double> v;       // cell averages, all > 0
  double a_left = 0.0;         // primal left interface position
  double t = 0.0;              // normalized time
  DualScale scale;
  double m = 0.0;              // model exponent (0 for RHE)
  std::vector<double> singular;  // marked singular mass coordinates

  int n() const { return static_cast<int>(v.size()); }
  double deta() const { return M / n(); }
  double eta(int j) const { return (j + 0.5) * deta(); }
  /// Normalized dual mass = (support length)/eta_factor.
  double dual_mass() const;
};

void validate(const DualProfile& d);

/// Monotone piecewise-linear CDF inversion of p; requires connected support
/// with u > u_floor throughout it.
DualProfile to_dual(const ModelSpec& spec, const Profile& p, int n_eta = 500);

/// Reconstruction on a requested grid: x walks a_left + eta_factor * cumsum(v deta),
/// u = 1/v, binned conservatively to cells. Inverse of to_dual up to
/// interpolation error.
Profile from_dual(const DualProfile& d, const Grid& grid);

struct DualOptions {
  double cfl = 0.4;
  double record_every = 0.05;   // in normalized time
  double blowup_cap = 1e6;
  /// Contact is signalled when max v exceeds contact_coef * max(v0,1) *
  /// deta^{-1/(m+1)} — the largest cell average an integrable contact profile
  /// v ~ eta^{-1/(m+1)} can produce; beyond it the boundary flux cannot be
  /// absorbed and the vertical-contact interface is lost.
  double contact_coef = 5.0;
};

struct DualEvolveResult {
  DualProfile final;
  std::vector<DualProfile> snapshots;
  /// Normalized time of the contact/blow-up signal (FLPME contact time T*,
  /// scaled); unset when the run completes.
  std::optional<double> contact_time;
};

/// Explicit conservative FV for
///   v_t = (v_eta/sqrt(v^{4+2m}+v_eta^2))_eta + eps v_etaeta
/// with total face flux +-(1 - eps^{1/3}) at eta in {0, M}. The discrete dual
/// mass obeys d/dt integral(v) = 2(1-eps^{1/3}) exactly. Requires eps in (0, 1e-2].
DualEvolveResult dual_evolve(const DualProfile& d, double t_end, double eps,
                             const DualOptions& opts = {});

/// Mass coordinates where |dv/deta| exceeds slope_threshold, contiguous steep
/// faces merged into one coordinate.
std::vector<double> singular_set(const DualProfile& d, double slope_threshold);

double default_slope_threshold(double deta);

/// CSV `eta,v` plus JSON sidecar {M, a_left, t, scale, singular[]}.
void write_dual_csv(const DualProfile& d, const std::string& csv_path,
                    const std::string& json_path);

}  // namespace fluxsat
