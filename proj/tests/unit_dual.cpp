#include <cmath>

#include "doctest.h"
#include "fluxsat/diagnostics.hpp"
#include "fluxsat/dual.hpp"

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

TEST_CASE("to_dual of the unit block") {
  Grid g{-0.5, 1e-2, 200};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, 0.0, 1.0, 1.0);
  DualProfile d = to_dual(spec, p, 100);
  CHECK(d.M == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.a_left == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.scale.time_factor == doctest::Approx(1.0));
  CHECK(d.scale.eta_factor == doctest::Approx(1.0));
  for (double v : d.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("to_dual of a squeezed block halves v") {
  Grid g{-0.5, 1e-2, 200};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, 0.0, 0.5, 2.0);
  DualProfile d = to_dual(spec, p, 64);
  CHECK(d.M == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : d.v) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("to_dual rejects interior vacuum") {
  Grid g{-0.5, 1e-2, 200};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = block(g, 0.0, 1.0, 1.0);
  p.u[100] = 0.0;
  try {
    to_dual(spec, p, 64);
    FAIL("expected InteriorVacuum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InteriorVacuum);
  }
  p.u[101] = 0.0;
  try {
    to_dual(spec, p, 64);
    FAIL("expected DisconnectedSupport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisconnectedSupport);
  }
}

TEST_CASE("from_dual inverts the unit block") {
  DualProfile d;
  d.M = 1.0;
  d.v.assign(128, 1.0);
  d.a_left = 0.0;
  d.m = 0.0;
  Grid g{-0.5, 1e-2, 200};
  Profile p = from_dual(d, g);
  CHECK(mass(p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.u[25] == doctest::Approx(0.0));   // x = -0.245
  CHECK(p.u[100] == doctest::Approx(1.0));  // x = 0.505
  CHECK(p.u[180] == doctest::Approx(0.0));  // x = 1.305

  DualProfile half;
  half.M = 1.0;
  half.v.assign(128, 0.5);
  half.a_left = 0.0;
  half.m = 0.0;
  Profile q = from_dual(half, g);
  CHECK(mass(q) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.u[60] == doctest::Approx(2.0));  // x = 0.105 inside [0, 0.5]
  CHECK(q.u[120] == doctest::Approx(0.0));
}

TEST_CASE("dual round trip on a smooth positive profile") {
  Grid g{-0.2, 2e-3, 700};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = make_profile(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.center(i);
    if (x > 0.0 && x < 1.0)
      p.u[static_cast<size_t>(i)] = 1.0 - 0.5 * std::cos(2.0 * M_PI * x);
  }
  const double M = mass(p);
  DualProfile d = to_dual(spec, p, 500);
  Profile q = from_dual(d, g);
  CHECK(l1_distance(p, q) <= 5e-3 * M);
}

TEST_CASE("dual mass identity holds exactly for the regularized flow") {
  DualProfile d;
  d.M = 1.0;
  d.v.assign(100, 1.0);
  d.a_left = 0.0;
  d.m = 0.0;
  const double eps = 1e-4;
  DualEvolveResult res = dual_evolve(d, 0.05, eps);
  CHECK(!res.contact_time.has_value());
  const double rate = (res.final.dual_mass() - d.dual_mass()) / (res.final.t - d.t);
  CHECK(rate == doctest::Approx(2.0 * (1.0 - std::cbrt(eps))).epsilon(1e-9));
  // Boundary layers grow, interior stays near 1.
  CHECK(res.final.v.front() > 1.01);
  CHECK(res.final.v.back() > 1.01);
  CHECK(res.final.v[50] == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("strictly positive RHE data evolve without contact") {
  Grid g{-0.2, 2e-3, 700};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = make_profile(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.center(i);
    if (x > 0.0 && x < 1.0)
      p.u[static_cast<size_t>(i)] = 1.0 - 0.5 * std::cos(2.0 * M_PI * x);
  }
  DualProfile d = to_dual(spec, p, 200);
  DualEvolveResult res = dual_evolve(d, d.t + 0.5, 1e-4);
  CHECK(!res.contact_time.has_value());
  CHECK(res.final.t == doctest::Approx(d.t + 0.5));
}

TEST_CASE("FLPME block data reach contact in finite time") {
  Grid g{-0.5, 5e-3, 400};
  auto spec = make_flpme(4.0, 1.0, 1.0);
  Profile p = block(g, 0.0, 1.0, 1.0);
  DualProfile d = to_dual(spec, p, 200);
  DualEvolveResult res = dual_evolve(d, d.t + 5.0, 1e-4);
  REQUIRE(res.contact_time.has_value());
  CHECK(*res.contact_time > 0.0);
  CHECK(*res.contact_time < 5.0);
}

TEST_CASE("singular_set finds an interior jump at its mass coordinate") {
  Grid g{-0.5, 2e-3, 1000};
  auto spec = make_rhe(1.0, 1.0);
  Profile p = make_profile(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.center(i);
    if (x > 0.0 && x < 0.4) p.u[static_cast<size_t>(i)] = 1.25;
    else if (x >= 0.4 && x < 1.0) p.u[static_cast<size_t>(i)] = 0.6;
  }
  DualProfile d = to_dual(spec, p, 500);
  auto sing = singular_set(d, 100.0);
  REQUIRE(sing.size() == 1);
  CHECK(std::abs(sing[0] - 0.5) <= 2.0 * d.deta());  // mass left of the jump: 1.25*0.4

  DualProfile smooth;
  smooth.M = 1.0;
  smooth.v.assign(200, 1.0);
  smooth.m = 0.0;
  CHECK(singular_set(smooth, 100.0).empty());
}

TEST_CASE("Step-1 super-solution dominates the regularized evolution") {
  const double eps = 1e-3;
  const double M = 1.0;
  const int n = 160;
  DualProfile d;
  d.M = M;
  d.v.assign(static_cast<size_t>(n), 0.0);
  d.m = 0.0;
  for (int j = 0; j < n; ++j) d.v[static_cast<size_t>(j)] = 0.5 + 0.1 * std::sin(6.0 * j / double(n));

  // V(t, eta) = B(t) - sqrt(eps^{2/3} + eta (M - eta)) with B' exceeding the
  // discrete operator applied to V, so V is a discrete super-solution.
  const double e23 = std::pow(eps, 2.0 / 3.0);
  auto Vfn = [&](double B, double eta) { return B - std::sqrt(e23 + eta * (M - eta)); };
  double vmax = 0.0;
  for (double v : d.v) vmax = std::max(vmax, v);
  const double B0 = vmax + std::sqrt(e23 + 0.25 * M * M) + 0.05;

  const double deta = M / n;
  auto op_on_V = [&](double B) {
    // max of (G + eps V_eta)_eta over the cells, via face fluxes
    double worst = -1e300;
    auto face = [&](int j) {  // face between cells j-1 and j
      if (j == 0) return -(1.0 - std::cbrt(eps));
      if (j == n) return 1.0 - std::cbrt(eps);
      const double vl = Vfn(B, (j - 0.5) * deta), vr = Vfn(B, (j + 0.5) * deta);
      const double xi = (vr - vl) / deta;
      const double z = 0.5 * (vl + vr);
      return xi / std::sqrt(std::pow(z, 4.0) + xi * xi) + eps * xi;
    };
    for (int j = 0; j < n; ++j) worst = std::max(worst, (face(j + 1) - face(j)) / deta);
    return worst;
  };
  const double T = 0.05;
  double lambda = std::max(0.0, op_on_V(B0)) + 1.0;
  lambda = std::max(lambda, op_on_V(B0 + lambda * T) + 1.0);  // account for B growth

  DualOptions opts;
  opts.record_every = T / 10.0;
  DualEvolveResult res = dual_evolve(d, T, eps, opts);
  for (const DualProfile& snap : res.snapshots) {
    const double B = B0 + lambda * snap.t;
    for (int j = 0; j < n; ++j) {
      const double V = Vfn(B, (j + 0.5) * deta);
      CHECK(snap.v[static_cast<size_t>(j)] <= V + 10.0 * deta);
    }
  }
}
