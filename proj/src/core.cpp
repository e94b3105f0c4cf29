#include "fluxsat/core.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fluxsat {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::NonPositiveConstant: return "NonPositiveConstant";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::VacuumDensity: return "VacuumDensity";
    case ErrorCode::EmptyProfile: return "EmptyProfile";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::BoundaryTouched: return "BoundaryTouched";
    case ErrorCode::DisconnectedSupport: return "DisconnectedSupport";
    case ErrorCode::InteriorVacuum: return "InteriorVacuum";
    case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
    case ErrorCode::TimeBeyondBlowup: return "TimeBeyondBlowup";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OptimizerDiverged: return "OptimizerDiverged";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::TooFewSnapshots: return "TooFewSnapshots";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

ModelSpec make_rhe(double nu, double c) {
  ModelSpec spec{ModelKind::Rhe, 0.0, nu, c};
  validate(spec);
  return spec;
}

ModelSpec make_flpme(double m, double nu, double c) {
  ModelSpec spec{ModelKind::Flpme, m, nu, c};
  validate(spec);
  return spec;
}

Profile make_profile(const Grid& grid, double t) {
  validate(grid);
  Profile p;
  p.grid = grid;
  p.u.assign(static_cast<size_t>(grid.n), 0.0);
  p.t = t;
  return p;
}

void validate(const ModelSpec& spec) {
  if (!(spec.nu > 0.0) || !std::isfinite(spec.nu))
    fail(ErrorCode::NonPositiveConstant, "nu must be > 0");
  if (!(spec.c > 0.0) || !std::isfinite(spec.c))
    fail(ErrorCode::NonPositiveConstant, "c must be > 0");
  if (spec.kind == ModelKind::Rhe) {
    if (spec.m != 0.0) fail(ErrorCode::BadExponent, "RHE requires m = 0");
  } else {
    if (!(spec.m >= 1.0) || !std::isfinite(spec.m))
      fail(ErrorCode::BadExponent, "FLPME requires m >= 1");
  }
}

void validate(const Grid& grid) {
  if (!(grid.dx > 0.0) || !std::isfinite(grid.dx))
    fail(ErrorCode::InvalidGrid, "dx must be > 0");
  if (grid.n < 3) fail(ErrorCode::InvalidGrid, "grid needs at least 3 cells");
  if (!std::isfinite(grid.x0)) fail(ErrorCode::InvalidGrid, "x0 must be finite");
}

void validate(const ModelSpec& spec, const Profile& p) {
  validate(spec);
  validate(p.grid);
  if (p.u.size() != static_cast<size_t>(p.grid.n))
    fail(ErrorCode::InvalidGrid, "profile length does not match grid");
  if (!(p.t >= 0.0)) fail(ErrorCode::InvalidGrid, "timestamp must be >= 0");
  double mass = 0.0;
  for (size_t i = 0; i < p.u.size(); ++i) {
    if (p.u[i] < 0.0 || !std::isfinite(p.u[i]))
      fail(ErrorCode::NegativeDensity, "cell " + std::to_string(i), static_cast<long>(i));
    mass += p.u[i];
  }
  if (!std::isfinite(mass * p.grid.dx))
    fail(ErrorCode::NegativeDensity, "total mass is not finite");
}

ModelSpec rescale(const ModelSpec& spec, double K, double L, double T) {
  validate(spec);
  if (!(K > 0.0) || !(L > 0.0) || !(T > 0.0))
    fail(ErrorCode::NonPositiveConstant, "rescale requires K, L, T > 0");
  ModelSpec out = spec;
  const double Km = std::pow(K, spec.m);
  out.nu = spec.nu * T / (Km * L * L);
  // Second relation: nu^2/(c^2 L^2 K^{2m}) = nu~^2/c~^2  =>  c~ = c T / L.
  out.c = spec.c * T / L;
  return out;
}

void write_profile_csv(const Profile& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ConfigError, "cannot open " + path + " for writing");
  out << "x,u\n";
  char buf[128];
  for (int i = 0; i < p.grid.n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.grid.center(i), p.u[static_cast<size_t>(i)]);
    out << buf;
  }
}

Profile read_profile_csv(const std::string& path, double t) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ConfigError, path + " is empty");
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string xs_str, us_str;
    if (!std::getline(row, xs_str, ',') || !std::getline(row, us_str, ','))
      fail(ErrorCode::ConfigError, path + ": malformed row '" + line + "'");
    xs.push_back(std::stod(xs_str));
    us.push_back(std::stod(us_str));
  }
  if (xs.size() < 3) fail(ErrorCode::ConfigError, path + ": need at least 3 rows");
  const double dx = xs[1] - xs[0];
  for (size_t i = 1; i + 1 < xs.size(); ++i) {
    if (std::abs((xs[i + 1] - xs[i]) - dx) > 1e-9 * std::abs(dx))
      fail(ErrorCode::ConfigError, path + ": grid is not uniform");
  }
  Profile p;
  p.grid = Grid{xs[0] - 0.5 * dx, dx, static_cast<int>(xs.size())};
  p.u = std::move(us);
  p.t = t;
  return p;
}

}  // namespace fluxsat
