#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluxsat/analytic.hpp"
#include "fluxsat/diagnostics.hpp"
#include "fluxsat/dual.hpp"
#include "fluxsat/experiment.hpp"
#include "fluxsat/flux.hpp"
#include "fluxsat/jko.hpp"
#include "fluxsat/solver.hpp"

namespace py = pybind11;
using namespace fluxsat;

PYBIND11_MODULE(_fluxsat, m) {
  m.doc() = "1D flux-saturated diffusion laboratory (RHE / FLPME)";
  m.attr("u_floor") = u_floor;

  py::register_exception<Error>(m, "FluxsatError");

  py::enum_<ModelKind>(m, "ModelKind")
      .value("Rhe", ModelKind::Rhe)
      .value("Flpme", ModelKind::Flpme);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_readonly("kind", &ModelSpec::kind)
      .def_readonly("m", &ModelSpec::m)
      .def_readonly("nu", &ModelSpec::nu)
      .def_readonly("c", &ModelSpec::c)
      .def("__repr__", [](const ModelSpec& s) {
        return std::string(s.kind == ModelKind::Rhe ? "rhe" : "flpme") +
               "(m=" + std::to_string(s.m) + ", nu=" + std::to_string(s.nu) +
               ", c=" + std::to_string(s.c) + ")";
      });
  m.def("rhe", &make_rhe, py::arg("nu") = 1.0, py::arg("c") = 1.0);
  m.def("flpme", &make_flpme, py::arg("m"), py::arg("nu") = 1.0, py::arg("c") = 1.0);
  m.def("rescale", &rescale, py::arg("spec"), py::arg("K"), py::arg("L"), py::arg("T"));

  py::class_<Grid>(m, "Grid")
      .def(py::init([](double x0, double dx, int n) { return Grid{x0, dx, n}; }),
           py::arg("x0"), py::arg("dx"), py::arg("n"))
      .def_readonly("x0", &Grid::x0)
      .def_readonly("dx", &Grid::dx)
      .def_readonly("n", &Grid::n)
      .def("center", &Grid::center);

  py::class_<Profile>(m, "Profile")
      .def(py::init([](const Grid& g, std::vector<double> u, double t) {
             Profile p;
             p.grid = g;
             p.u = std::move(u);
             p.t = t;
             return p;
           }),
           py::arg("grid"), py::arg("u"), py::arg("t") = 0.0)
      .def_readonly("grid", &Profile::grid)
      .def_readonly("u", &Profile::u)
      .def_readonly("t", &Profile::t);

  m.def("flux_a", &flux_a);
  m.def("flux_b", &flux_b);
  m.def("flux_h", &flux_h);
  m.def("lagrangian_f", &lagrangian_f);
  m.def("cost_k", &cost_k);
  m.def("cost_kstar", &cost_kstar);
  m.def("stable_dt", &stable_dt);
  m.def("mass", &mass);
  m.def("l1_distance", &l1_distance);

  py::enum_<Limiter>(m, "Limiter").value("None_", Limiter::None).value("Minmod", Limiter::Minmod);
  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("cfl", &SolverOptions::cfl)
      .def_readwrite("limiter", &SolverOptions::limiter)
      .def_readwrite("epsilon_visc", &SolverOptions::epsilon_visc)
      .def_readwrite("record_every", &SolverOptions::record_every)
      .def_readwrite("dirichlet_left", &SolverOptions::dirichlet_left)
      .def_readwrite("dirichlet_right", &SolverOptions::dirichlet_right);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("spec", &Trajectory::spec)
      .def_readonly("snapshots", &Trajectory::snapshots);

  m.def("step", &step);
  m.def("evolve", &evolve, py::arg("spec"), py::arg("p0"), py::arg("t_end"),
        py::arg("opts") = SolverOptions{});
  m.def("write_trajectory", &write_trajectory, py::arg("trajectory"), py::arg("dir"),
        py::arg("stem") = "u");

  py::class_<DualScale>(m, "DualScale")
      .def_readonly("time_factor", &DualScale::time_factor)
      .def_readonly("eta_factor", &DualScale::eta_factor);
  py::class_<DualProfile>(m, "DualProfile")
      .def_readonly("M", &DualProfile::M)
      .def_readonly("v", &DualProfile::v)
      .def_readonly("a_left", &DualProfile::a_left)
      .def_readonly("t", &DualProfile::t)
      .def_readonly("scale", &DualProfile::scale)
      .def_readonly("m", &DualProfile::m)
      .def("dual_mass", &DualProfile::dual_mass)
      .def("deta", &DualProfile::deta);
  py::class_<DualOptions>(m, "DualOptions")
      .def(py::init<>())
      .def_readwrite("cfl", &DualOptions::cfl)
      .def_readwrite("record_every", &DualOptions::record_every)
      .def_readwrite("blowup_cap", &DualOptions::blowup_cap)
      .def_readwrite("contact_coef", &DualOptions::contact_coef);
  py::class_<DualEvolveResult>(m, "DualEvolveResult")
      .def_readonly("final", &DualEvolveResult::final)
      .def_readonly("snapshots", &DualEvolveResult::snapshots)
      .def_readonly("contact_time", &DualEvolveResult::contact_time);
  m.def("to_dual", &to_dual, py::arg("spec"), py::arg("p"), py::arg("n_eta") = 500);
  m.def("from_dual", &from_dual);
  m.def("dual_evolve", &dual_evolve, py::arg("d"), py::arg("t_end"), py::arg("eps"),
        py::arg("opts") = DualOptions{});
  m.def("singular_set", &singular_set);
  m.def("default_slope_threshold", &default_slope_threshold);

  py::class_<TravelingWave>(m, "TravelingWave")
      .def("__call__", &TravelingWave::operator())
      .def("wm_slope", &TravelingWave::wm_slope)
      .def_readonly("sigma", &TravelingWave::sigma)
      .def_readonly("xi0", &TravelingWave::xi0);
  m.def("traveling_wave", &traveling_wave);
  m.def("jump_extinction_bound", &jump_extinction_bound);
  m.def("jump_extinction_objective", &jump_extinction_objective);
  m.def("waiting_time_bound", &waiting_time_bound);
  m.def("supnorm_bound", &supnorm_bound);
  m.def("check_vinequality", &check_vinequality);

  py::class_<QuantileFn>(m, "QuantileFn")
      .def_readonly("q", &QuantileFn::q)
      .def("s", &QuantileFn::s)
      .def("ds", &QuantileFn::ds);
  py::enum_<Entropy>(m, "Entropy")
      .value("Boltzmann", Entropy::Boltzmann)
      .value("Tsallis", Entropy::Tsallis);
  py::class_<JkoConfig>(m, "JkoConfig")
      .def(py::init<>())
      .def_readwrite("h", &JkoConfig::h)
      .def_readwrite("entropy", &JkoConfig::entropy)
      .def_readwrite("m", &JkoConfig::m)
      .def_readwrite("n_q", &JkoConfig::n_q)
      .def_readwrite("max_inner_iters", &JkoConfig::max_inner_iters)
      .def_readwrite("grad_tol", &JkoConfig::grad_tol);
  m.def("quantiles", &quantiles);
  m.def("transport_cost", &transport_cost);
  m.def("jko_step", &jko_step);
  m.def("jko_evolve", &jko_evolve);

  py::class_<SupportInfo>(m, "SupportInfo")
      .def_readonly("left_cell", &SupportInfo::left_cell)
      .def_readonly("right_cell", &SupportInfo::right_cell)
      .def_readonly("left_pos", &SupportInfo::left_pos)
      .def_readonly("right_pos", &SupportInfo::right_pos);
  m.def("support_and_jumps", &support_and_jumps, py::arg("p"), py::arg("jump_threshold") = 0.25);
  m.def("measure_waiting_time", &measure_waiting_time, py::arg("trajectory"),
        py::arg("cells_tol") = 2);

  m.def("parse_config", &parse_config);
  m.def("run_experiment",
        [](const std::string& path) {
          auto res = run_experiment(parse_config(path));
          return py::make_tuple(res.all_pass, res.summary_path);
        },
        py::arg("config_path"));
}
