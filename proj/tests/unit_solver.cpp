#include <cmath>
#include <random>

#include "doctest.h"
#include "fluxsat/analytic.hpp"
#include "fluxsat/diagnostics.hpp"
#include "fluxsat/flux.hpp"
#include "fluxsat/solver.hpp"

using namespace fluxsat;

namespace {

Profile block(const Grid& g, double left, double right, double height) {
  Profile p = make_profile(g);
  for (int i = 0; i < g.n; ++i) {
    const double cl = g.left_edge(i), cr = g.left_edge(i + 1);
    const double overlap = std::min(cr, right) - std::max(cl, left);
    if (overlap > 0.0) p.u[static_cast<size_t>(i)] = height * overlap / g.dx;
  }
  return p;
}

Profile random_bump(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> amp(0.2, 2.0), width(0.05, 0.15), center(-0.2, 0.2);
  const double A = amp(rng), w = width(rng), c0 = center(rng);
  Profile p = make_profile(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.center(i) - c0;
    if (std::abs(x) < 3.0 * w) p.u[static_cast<size_t>(i)] = A * std::exp(-x * x / (2 * w * w));
  }
  return p;
}

}  // namespace

TEST_CASE("constant interior stays constant for one step") {
  Grid g{0.0, 0.01, 200};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, 0.2, 1.8, 0.7);
  SolverOptions opts;
  const double dt = stable_dt(spec, p, opts.cfl);
  Profile q = step(spec, p, dt, opts);
  for (int i = 40; i < 160; ++i)
    CHECK(q.u[static_cast<size_t>(i)] == p.u[static_cast<size_t>(i)]);
}

TEST_CASE("vacuum is a fixed point of evolve") {
  Grid g{0.0, 0.05, 60};
  auto spec = make_flpme(2.0, 1.0, 1.0);
  Profile p = make_profile(g);
  SolverOptions opts;
  opts.record_every = 0.25;
  Trajectory tr = evolve(spec, p, 1.0, opts);
  for (const Profile& s : tr.snapshots)
    for (double v : s.u) CHECK(v == 0.0);
  CHECK(tr.snapshots.back().t == doctest::Approx(1.0));
}

TEST_CASE("one step tracks the exact traveling wave to O(dx)") {
  const double sigma = 0.6;
  auto spec = make_flpme(1.0, 1.0, 1.0);
  TravelingWave tw = traveling_wave(spec, sigma, 0.0);
  Grid g{-2.0, 1e-3, 3000};  // wave positive for x < sigma t
  Profile p = make_profile(g);
  for (int i = 0; i < g.n; ++i) p.u[static_cast<size_t>(i)] = tw(0.0, g.center(i));
  SolverOptions opts;
  opts.dirichlet_left = [tw](double t, double x) { return tw(t, x); };
  const double dt = stable_dt(spec, p, opts.cfl);
  Profile q = step(spec, p, dt, opts);
  double err = 0.0;
  for (int i = 0; i < g.n; ++i)
    err += std::abs(q.u[static_cast<size_t>(i)] - tw(q.t, g.center(i))) * g.dx;
  CHECK(err <= g.dx);
}

TEST_CASE("RHE block front advances at speed c") {
  Grid g{-1.0, 2e-3, 1500};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, 0.0, 1.0, 1.0);
  SolverOptions opts;
  opts.record_every = 0.02;
  Trajectory tr = evolve(spec, p, 0.2, opts);
  SupportInfo s0 = support_and_jumps(tr.snapshots.front());
  SupportInfo s1 = support_and_jumps(tr.snapshots.back());
  const double expected_cells = spec.c * 0.2 / g.dx;
  CHECK(std::abs((s1.right_cell - s0.right_cell) - expected_cells) <= 3.0);
  CHECK(std::abs((s0.left_cell - s1.left_cell) - expected_cells) <= 3.0);
}

TEST_CASE("mass conservation to 1e-12 relative on random data") {
  std::mt19937 rng(42);
  Grid g{-1.0, 5e-3, 400};
  for (int rep = 0; rep < 5; ++rep) {
    Profile p = random_bump(g, rng);
    const double m0 = mass(p);
    for (auto spec : {make_rhe(1.0, 1.0), make_flpme(2.0, 1.0, 1.0)}) {
      SolverOptions opts;
      opts.record_every = 0.05;
      Trajectory tr = evolve(spec, p, 0.1, opts);
      for (const Profile& s : tr.snapshots) {
        CHECK(std::abs(mass(s) - m0) <= 1e-12 * m0);
        for (double v : s.u) CHECK(v >= 0.0);
      }
    }
  }
}

TEST_CASE("finite propagation: support moves at most ceil(c dt/dx)+1 cells per step") {
  Grid g{-1.0, 4e-3, 500};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, -0.3, 0.3, 1.5);
  SolverOptions opts;
  for (int k = 0; k < 50; ++k) {
    const double dt = stable_dt(spec, p, opts.cfl);
    Profile q = step(spec, p, dt, opts);
    SupportInfo sp = support_and_jumps(p);
    SupportInfo sq = support_and_jumps(q);
    const int max_move = static_cast<int>(std::ceil(spec.c * dt / g.dx)) + 1;
    CHECK(sp.left_cell - sq.left_cell <= max_move);
    CHECK(sq.right_cell - sp.right_cell <= max_move);
    p = q;
  }
}

TEST_CASE("discrete comparison for ordered data") {
  std::mt19937 rng(77);
  Grid g{-1.0, 5e-3, 400};
  std::uniform_real_distribution<double> extra(0.05, 0.5);
  for (int rep = 0; rep < 20; ++rep) {
    Profile lo_p = random_bump(g, rng);
    Profile hi_p = lo_p;
    const double lift = extra(rng);
    // A wider, taller envelope keeps the order at t=0.
    for (int i = 0; i < g.n; ++i) {
      const double x = g.center(i);
      if (std::abs(x) < 0.85) hi_p.u[static_cast<size_t>(i)] += lift;
    }
    auto spec = (rep % 2 == 0) ? make_rhe(1.0, 1.0) : make_flpme(1.0, 1.0, 1.0);
    SolverOptions opts;
    opts.record_every = 0.02;
    Trajectory tlo = evolve(spec, lo_p, 0.06, opts);
    Trajectory thi = evolve(spec, hi_p, 0.06, opts);
    REQUIRE(tlo.snapshots.size() == thi.snapshots.size());
    for (size_t k = 0; k < tlo.snapshots.size(); ++k) {
      double worst = 0.0;
      for (int i = 0; i < g.n; ++i)
        worst = std::max(worst, tlo.snapshots[k].u[static_cast<size_t>(i)] -
                                    thi.snapshots[k].u[static_cast<size_t>(i)]);
      CHECK(worst <= 10.0 * g.dx);
    }
  }
}

TEST_CASE("semi-discrete traveling-wave residual decays at O(dx)") {
  const double sigma = 0.6;
  auto spec = make_flpme(1.0, 1.0, 1.0);
  TravelingWave tw = traveling_wave(spec, sigma, 0.0);
  auto residual = [&](double dx) {
    Grid g{-2.0, dx, static_cast<int>(std::lround(2.5 / dx))};
    Profile p = make_profile(g);
    for (int i = 0; i < g.n; ++i) p.u[static_cast<size_t>(i)] = tw(0.0, g.center(i));
    SolverOptions opts;
    opts.dirichlet_left = [tw](double t, double x) { return tw(t, x); };
    const double dt = 1e-9;  // isolates the spatial operator
    Profile q = step(spec, p, dt, opts);
    // Interface cell index: wave vanishes at x = 0.
    const int iface = static_cast<int>(std::lround((0.0 - g.x0) / dx));
    double worst = 0.0;
    for (int i = 5; i < g.n - 5; ++i) {
      if (std::abs(i - iface) <= 5) continue;
      const double x = g.center(i);
      const double ut_exact =
          -sigma * (tw(0.0, x) > 0.0 ? -sigma / (1.0 * std::sqrt(1.0 - 0.36)) : 0.0);
      const double ut_num = (q.u[static_cast<size_t>(i)] - p.u[static_cast<size_t>(i)]) / dt;
      worst = std::max(worst, std::abs(ut_num - ut_exact));
    }
    return worst;
  };
  const double r1 = residual(4e-3);
  const double r2 = residual(2e-3);
  CHECK(r2 < r1);
  CHECK(r1 / std::max(r2, 1e-300) > 1.4);  // at least first order
}

TEST_CASE("step rejects oversized dt and touched boundaries") {
  Grid g{0.0, 0.01, 100};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, 0.3, 0.7, 1.0);
  SolverOptions opts;
  const double dt = stable_dt(spec, p, opts.cfl);
  CHECK_THROWS_AS(step(spec, p, 10.0 * dt, opts), Error);

  Profile edge = block(g, 0.0, 0.3, 1.0);  // support starts in the buffer
  try {
    step(spec, edge, dt, opts);
    FAIL("expected BoundaryTouched");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryTouched);
  }
}
