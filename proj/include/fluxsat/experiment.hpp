#pragma once

#include <map>
#include <string>

#include "fluxsat/dual.hpp"
#include "fluxsat/jko.hpp"
#include "fluxsat/solver.hpp"

namespace fluxsat {

/// Flat key=value config with [section] headers; see configs/ for examples.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string route = "primal";  // primal | dual | jko | all
  double t_end = 0.5;
  double record_every = 0.1;
  std::string output_dir;

  ModelSpec model;
  Grid grid;

  std::string initial_kind = "block";
  std::map<std::string, double> initial_params;
  std::string initial_file;  // custom_csv

  SolverOptions solver;
  int dual_n_eta = 500;
  double dual_eps = 1e-4;
  JkoConfig jko;

  // diagnostics toggles
  bool check_mass = true;
  bool report_fronts = true;
  int front_window = 10;
  double jump_threshold = 0.25;
  bool check_front_speed = false;   // assert RH speed = c within front_speed_tol
  double front_speed_tol = 0.05;    // relative to c
  bool check_supnorm = false;       // assert the log-concave decay bound
  double supnorm_eps = 0.25;
  bool check_waiting = false;       // assert waiting time >= the k~ bound
  double waiting_k_tilde = 0.0;     // 0 = fit from the datum
  int waiting_cells_tol = 2;
};

ExperimentConfig parse_config(const std::string& path);

/// Initial-datum catalog shared by the CLI and the test suites.
Profile build_initial_datum(const ExperimentConfig& cfg);

struct ExperimentResult {
  bool all_pass = true;
  std::string summary_path;
};

/// Writes trajectory CSVs, front report JSON, summary JSON of every
/// bound-vs-measured comparison, and a plot script. FLUXSAT_OUT overrides the
/// configured output directory. Deterministic: no randomness anywhere.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Prints the analytic bounds implied by a config without running it.
void print_bounds(const ExperimentConfig& cfg);

}  // namespace fluxsat
