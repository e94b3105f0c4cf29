#include <cmath>

#include "doctest.h"
#include "fluxsat/analytic.hpp"
#include "fluxsat/flux.hpp"

using namespace fluxsat;

TEST_CASE("traveling wave hand values") {
  auto m1 = make_flpme(1.0, 1.0, 1.0);
  TravelingWave w1 = traveling_wave(m1, 0.6, 0.0);
  CHECK(w1(0.0, -2.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(w1(0.0, 1.0) == 0.0);  // vacuum side

  auto m2 = make_flpme(2.0, 1.0, 1.0);
  TravelingWave w2 = traveling_wave(m2, 0.8, 1.0);
  CHECK(w2(0.0, 0.25) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(traveling_wave(m1, 1.5, 0.0), Error);
  CHECK_THROWS_AS(traveling_wave(make_rhe(1.0, 1.0), 0.5, 0.0), Error);
}

TEST_CASE("traveling wave satisfies the first integral with K = 0") {
  auto spec = make_flpme(3.0, 0.7, 1.4);
  const double sigma = 0.9, xi0 = 0.3;
  TravelingWave w = traveling_wave(spec, sigma, xi0);
  const double swm = w.wm_slope();
  for (int k = 0; k < 1000; ++k) {
    const double xi = xi0 - 3.0 * (k + 0.5) / 1000.0;  // positivity region
    const double u = w(0.0, xi);
    REQUIRE(u > 0.0);
    const double beta = spec.nu / spec.c;
    const double lhs = spec.nu * u * swm / std::sqrt(1.0 + beta * beta * swm * swm) + sigma * u;
    CHECK(std::abs(lhs) <= 1e-10);
  }
}

TEST_CASE("jump extinction bound against a dense scan oracle") {
  auto spec = make_flpme(1.0, 1.0, 1.0);
  CHECK(jump_extinction_objective(spec, 1.0, 1.0, 0.0, 0.5) ==
        doctest::Approx((std::sqrt(0.75) / 0.5 + 1.0) / 0.5).epsilon(1e-12));

  const double bound = jump_extinction_bound(spec, 1.0, 1.0, 0.0);
  // Independent oracle: dense scan over sigma.
  double oracle = 1e300;
  const int N = 2'000'000;
  for (int i = 0; i < N; ++i) {
    const double s = (i + 0.5) / N;
    oracle = std::min(oracle, jump_extinction_objective(spec, 1.0, 1.0, 0.0, s));
  }
  CHECK(bound == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::abs(bound - 5.43) <= 0.01);

  // d -> b with alpha -> 0+ drives the bound to 0+.
  CHECK(jump_extinction_bound(spec, 1e-9, 1.0, 1.0) < 1e-4);
}

TEST_CASE("waiting-time and sup-norm bounds") {
  CHECK(waiting_time_bound(1.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(waiting_time_bound(3.0, 2.0, -1.0, 1.0) == doctest::Approx(0.0125).epsilon(1e-14));
  CHECK(waiting_time_bound(1.0, 1e14, 0.0, 1.0) < 1e-10);

  CHECK(supnorm_bound(1.0, 0.5, 1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(supnorm_bound(1.0, 0.5, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(supnorm_bound(2.0, 0.1, 2.0, 0.45) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("check_vinequality") {
  const double k_tilde = 1.0, delta = 1.0;
  auto v = quartic_witness(k_tilde, delta);
  const double k = quartic_witness_k(k_tilde, delta);
  CHECK(check_vinequality(v, k, -delta, delta, 1000));
  CHECK(check_vinequality([](double) { return 1.0; }, 0.5, -1.0, 1.0, 100));
  CHECK_FALSE(check_vinequality([](double x) { return x * x; }, 1.9, -0.5, 0.5, 100));
}

TEST_CASE("waiting barriers: initial factor, blow-up guard, static support") {
  auto spec = make_flpme(1.0, 1.0, 1.0);
  BarrierSpec bs{BarrierFamily::WaitingSuper, {{"k_tilde", 1.0}, {"delta", 1.0}, {"k", 1.0}}};
  BarrierFn super = make_barrier(bs, spec);
  auto v = quartic_witness(1.0, 1.0);
  // alpha(0) = 1: the barrier starts at v(x)^{1/m}.
  CHECK(super(0.0, 0.3) == doctest::Approx(v(0.3)).epsilon(1e-12));
  CHECK_THROWS_AS(super(1.0 / 3.0, 0.0), Error);
  try {
    super(0.4, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TimeBeyondBlowup);
  }
  for (double t : {0.0, 0.1, 0.2, 0.3}) {
    CHECK(super(t, 1.01) == 0.0);
    CHECK(super(t, -1.01) == 0.0);
    CHECK(super(t, 0.99) > 0.0);
  }

  BarrierSpec bsub{BarrierFamily::WaitingSub, {{"k_tilde", 1.0}, {"delta", 1.0}, {"k", 1.0}}};
  BarrierFn sub = make_barrier(bsub, spec);
  for (double t : {0.0, 0.5, 5.0}) {
    CHECK(sub(t, 1.01) == 0.0);
    CHECK(sub(t, 0.5) > 0.0);
    CHECK(sub(t, 0.5) <= sub(0.0, 0.5));
  }
}

TEST_CASE("waiting barrier residual signs at interior samples") {
  auto spec = make_flpme(2.0, 1.0, 1.0);
  const double k_tilde = 1.0, delta = 1.0;
  const double k = quartic_witness_k(k_tilde, delta);
  BarrierSpec bsup{BarrierFamily::WaitingSuper, {{"k_tilde", k_tilde}, {"delta", delta}}};
  BarrierSpec bsub{BarrierFamily::WaitingSub, {{"k_tilde", k_tilde}, {"delta", delta}}};
  BarrierFn super = make_barrier(bsup, spec);
  BarrierFn sub = make_barrier(bsub, spec);

  const double dx = 1e-3, dt = 1e-7;
  const double t_max = 0.5 * waiting_blowup_time(spec.m, k);
  for (int it = 1; it <= 4; ++it) {
    const double t = t_max * it / 4.0;
    for (int ix = 0; ix < 17; ++ix) {
      const double x = -0.8 * delta + 1.6 * delta * ix / 16.0;
      auto residual = [&](const BarrierFn& fn) {
        const double ut = (fn(t + dt, x) - fn(t - dt, x)) / (2.0 * dt);
        auto w = [&](double xx) { return std::pow(fn(t, xx), spec.m); };
        auto face = [&](double xl, double xr) {
          const double z = 0.5 * (fn(t, xl) + fn(t, xr));
          const double xi = (w(xr) - w(xl)) / (xr - xl);
          return flux_a(spec, z, xi);
        };
        return ut - (face(x, x + dx) - face(x - dx, x)) / dx;
      };
      CHECK(residual(super) >= -10.0 * dx * dx);
      CHECK(residual(sub) <= 10.0 * dx * dx);
    }
  }
}

TEST_CASE("RHE expanding sub-solution: value, support, fitted betas") {
  auto spec = make_rhe(1.0, 1.0);
  BarrierSpec bs{BarrierFamily::RheExpandingSub,
                 {{"alpha0", 1.0}, {"gamma0", 0.0}, {"R0", 1.0}, {"beta1", 0.0}, {"beta2", 0.0}}};
  BarrierFn raw = make_barrier(bs, spec);
  CHECK(raw(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {0.0, 0.25, 0.5}) {
    const double r = 1.0 + t;
    CHECK(raw(t, r + 1e-9) == 0.0);
    CHECK(raw(t, r - 1e-6) > 0.0);
    CHECK(raw(t, -r - 1e-9) == 0.0);
  }

  BarrierSpec fit{BarrierFamily::RheExpandingSub, {{"alpha0", 1.0}, {"gamma0", 0.1}, {"R0", 1.0}}};
  const double beta = fit_sub_barrier_betas(fit, spec);
  CHECK(beta > 0.0);
  fit.params["beta1"] = beta;
  fit.params["beta2"] = beta;
  BarrierFn fitted = make_barrier(fit, spec);
  // Fitted barrier has nonpositive residual at fresh sample points.
  const double dx = 1e-4, dt = 1e-6;
  for (double t : {0.1, 0.3}) {
    for (double x : {-0.6, 0.2, 0.7}) {
      const double ut = (fitted(t + dt, x) - fitted(t - dt, x)) / (2.0 * dt);
      auto face = [&](double xl, double xr) {
        const double z = 0.5 * (fitted(t, xl) + fitted(t, xr));
        const double xi = (fitted(t, xr) - fitted(t, xl)) / (xr - xl);
        return flux_a(spec, z, xi);
      };
      CHECK(ut - (face(x, x + dx) - face(x - dx, x)) / dx <= 1e-5);
    }
  }
}

TEST_CASE("two-bump sub-solution geometry") {
  auto spec = make_rhe(1.0, 1.0);
  BarrierSpec bs{BarrierFamily::RheTwoBumpSub,
                 {{"alpha0", 0.5}, {"l", 1.0}, {"kappa", 0.4}, {"beta1", 1.0}, {"beta2", 1.0}}};
  BarrierFn w = make_barrier(bs, spec);
  CHECK(w(0.0, -1.0) > 0.0);
  CHECK(w(0.0, 1.0) > 0.0);
  CHECK(w(0.0, 0.0) == 0.0);  // bumps are initially separated
  const double t_meet = (1.0 - 0.4) / 1.0;
  CHECK(w(t_meet + 0.2, 0.0) > 0.0);  // cones have met the origin

  BarrierSpec bad{BarrierFamily::RheTwoBumpSub,
                  {{"alpha0", 0.5}, {"l", 0.3}, {"kappa", 0.4}, {"beta1", 1.0}, {"beta2", 1.0}}};
  CHECK_THROWS_AS(make_barrier(bad, spec), Error);
}

TEST_CASE("vertical-contact super-solution") {
  auto spec = make_rhe(1.0, 1.0);
  BarrierSpec bs{BarrierFamily::VerticalSuper, {{"A0", 2.0}, {"R0", 1.0}, {"alpha", 0.5}}};
  BarrierFn U = make_barrier(bs, spec);
  CHECK(U(0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(U(0.5, 1.5 + 1e-9) == 0.0);
  CHECK(U(0.5, 1.4) > 0.0);
}
