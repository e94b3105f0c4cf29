#include <cmath>

#include "doctest.h"
#include "fluxsat/diagnostics.hpp"

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

}  // namespace

TEST_CASE("mass values") {
  Grid g{-0.5, 1e-3, 2000};
  CHECK(mass(make_profile(g)) == 0.0);
  CHECK(mass(block(g, 0.0, 1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mass(block(g, 0.0, 0.5, 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("support and jumps of a block") {
  Grid g{-0.5, 1e-3, 2000};
  Profile p = block(g, 0.0, 1.0, 1.0);
  SupportInfo s = support_and_jumps(p, 0.5);
  CHECK(std::abs(s.left_pos - 0.0) <= 2.0 * g.dx);
  CHECK(std::abs(s.right_pos - 1.0) <= 2.0 * g.dx);
  REQUIRE(s.jumps.size() == 2);
  CHECK(std::abs(s.jumps.front().x - 0.0) <= 2.0 * g.dx);
  CHECK(std::abs(s.jumps.back().x - 1.0) <= 2.0 * g.dx);

  Profile smooth = make_profile(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.center(i);
    if (std::abs(x) < 0.4) smooth.u[static_cast<size_t>(i)] = std::cos(x * M_PI / 0.8);
  }
  CHECK(support_and_jumps(smooth, 0.5).jumps.empty());

  CHECK_THROWS_AS(support_and_jumps(make_profile(g)), Error);
}

TEST_CASE("front_speed needs snapshots and propagates EmptySupport") {
  Trajectory tr;
  tr.spec = make_rhe(1.0, 1.0);
  Grid g{-0.5, 1e-2, 200};
  tr.snapshots.push_back(block(g, 0.0, 1.0, 1.0));
  CHECK_THROWS_AS(front_speed(tr, 10), Error);

  Trajectory vac;
  vac.spec = tr.spec;
  for (int k = 0; k < 4; ++k) {
    Profile p = make_profile(g, 0.1 * k);
    vac.snapshots.push_back(p);
  }
  CHECK_THROWS_AS(front_speed(vac, 2), Error);
}

TEST_CASE("front_speed of a uniformly translating block") {
  Grid g{-0.5, 1e-3, 3000};
  Trajectory tr;
  tr.spec = make_rhe(1.0, 1.0);
  const double speed = 1.0;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.01 * k;
    Profile p = block(g, 0.0 - speed * t, 1.0 + speed * t, 1.0);
    p.t = t;
    tr.snapshots.push_back(p);
  }
  FrontReport fr = front_speed(tr, 5);
  for (double v : fr.right_speed) CHECK(v == doctest::Approx(speed).epsilon(0.02));
  for (double v : fr.left_speed) CHECK(v == doctest::Approx(-speed).epsilon(0.02));
  for (double r : fr.rh_right)
    if (!std::isnan(r)) CHECK(r <= 0.02);
}

TEST_CASE("measure_waiting_time") {
  Grid g{-0.5, 1e-2, 200};
  Trajectory tr;
  tr.spec = make_rhe(1.0, 1.0);
  for (int k = 0; k <= 10; ++k) {
    Profile p = block(g, 0.0, 1.0, 1.0);
    p.t = 0.1 * k;
    tr.snapshots.push_back(p);
  }
  CHECK(std::isinf(measure_waiting_time(tr, 2)));

  Trajectory moving = tr;
  for (int k = 6; k <= 10; ++k)
    moving.snapshots[static_cast<size_t>(k)] = block(g, -0.05 * (k - 5), 1.0, 1.0);
  for (int k = 6; k <= 10; ++k) moving.snapshots[static_cast<size_t>(k)].t = 0.1 * k;
  CHECK(measure_waiting_time(moving, 2) == doctest::Approx(0.6));
}

TEST_CASE("check_comparison with trivial envelopes") {
  Grid g{-0.5, 1e-2, 200};
  Trajectory tr;
  tr.spec = make_rhe(1.0, 1.0);
  tr.snapshots.push_back(block(g, 0.0, 1.0, 1.0));
  auto zero = [](double, double) { return 0.0; };
  auto big = [](double, double) { return 1e9; };
  ComparisonReport rep = check_comparison(zero, tr, big, 1e-12);
  CHECK(rep.pass);
  auto above = [](double, double) { return 2.0; };
  ComparisonReport bad = check_comparison(above, tr, big, 1e-3);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_lower_violation == doctest::Approx(2.0));
}

TEST_CASE("l1_distance requires matching grids") {
  Grid g{-0.5, 1e-2, 200};
  Grid g2{-0.5, 2e-2, 100};
  Profile a = block(g, 0.0, 1.0, 1.0);
  Profile b = make_profile(g2);
  CHECK_THROWS_AS(l1_distance(a, b), Error);
  CHECK(l1_distance(a, a) == 0.0);
}
