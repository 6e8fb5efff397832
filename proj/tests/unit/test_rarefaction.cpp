#include <cmath>

#include "doctest.h"
#include "inflow/harness.hpp"
#include "inflow/numerics.hpp"
#include "inflow/rarefaction.hpp"

using namespace inflow;

TEST_CASE("Burgers data and characteristics") {
  const BurgersWave bw(-1, 1, 14);
  CHECK(bw.C_q == doctest::Approx(1.0 / 87178291200.0).epsilon(1e-15));
  CHECK(bw.w0(-3) == -1);
  CHECK(bw.w0(0) == -1);
  CHECK(bw.w0(1e4) == doctest::Approx(1).epsilon(1e-15));
  double prev = -2;
  for (double x = 0; x < 60; x += 0.25) {
    CHECK(bw.w0(x) >= prev);
    prev = bw.w0(x);
  }
  // w0 = w- + (w+ - w-) P(q+1, x)
  CHECK(bw.w0(15) == doctest::Approx(-1 + 2 * num::gamma_p(15, 15)).epsilon(1e-14));

  for (double T : {0.5, 3.0, 40.0})
    for (double x : {-100.0, -2 * T, -T}) CHECK(burgers_eval(bw, T, x) == -1);
  for (double x : {-1.0, 0.5, 14.0, 30.0}) CHECK(burgers_eval(bw, 0, x) == bw.w0(x));
  for (double T : {1.0, 10.0})
    for (double x : {2.0, 15.0, 40.0}) {
      const BurgersPoint p = burgers_solve(bw, T, x);
      CHECK(std::abs(p.x0 + bw.w0(p.x0) * T - x) <= 1e-13 * (1 + std::abs(x)));
      CHECK(p.wx == doctest::Approx(bw.w0_prime(p.x0) / (1 + bw.w0_prime(p.x0) * T)).epsilon(1e-12));
    }
}

TEST_CASE("finite-volume oracle") {
  CHECK(burgers_fv_l1(BurgersWave(-1, 1, 14), 5, -20, 60, 8000) <= 1e-3);
}

TEST_CASE("rarefaction fields") {
  Gas g;
  const CaseSetup c = generate_case(State{0.1, 1.0, 1.0}, StrengthInput{0.02, 0.05, 0.02, 0.05}, g);
  const Rarefaction r1(1, c.star, c.mid, c.sigma_minus, g, 14);
  const Rarefaction r3(3, c.star_up, c.right, c.sigma_minus, g, 14);
  const double sig = c.sigma_minus;
  for (const Rarefaction* r : {&r1, &r3}) {
    const double s0 = r->entropy_at(r->left().v, r->left().theta);
    double cmax = 0;
    for (double t : {0.0, 5.0, 50.0}) {
      const double T = 1 + t;
      // left plateau reproduces the anchor exactly
      const double xl = (r->burgers().w_minus - sig) * T - 1;
      if (xl >= 0) CHECK((r->eval(t, xl).value - r->left().vec()).cwiseAbs().maxCoeff() == 0);
      for (int j = 0; j <= 400; ++j) {
        const double xi = std::max(0.0, xl) + j * 0.5;
        const WavePoint p = r->eval(t, xi);
        CHECK(p.d1(1) >= 0);
        CHECK(std::abs(r->entropy_at(p.value(0), p.value(2)) - s0) <= 1e-10);
        if (p.d1(1) > 0) cmax = std::max(cmax, std::max(std::abs(p.d1(0)), std::abs(p.d1(2))) / p.d1(1));
      }
    }
    CHECK(cmax < 1e3);
  }
  // the 3-wave equals its left anchor up to xi = (lambda_3(left) - sigma)(1 + t)
  for (double t : {0.0, 10.0}) {
    const double edge = (r3.burgers().w_minus - sig) * (1 + t);
    for (double f : {0.2, 0.6, 1.0})
      CHECK((r3.eval(t, f * edge).value - c.star_up.vec()).cwiseAbs().maxCoeff() == 0);
  }
}

TEST_CASE("convergence to the centered fan") {
  Gas g;
  const CaseSetup c = generate_case(State{0.1, 1.0, 1.0}, StrengthInput{0.02, 0.05, 0.02, 0.05}, g);
  const Rarefaction r1(1, c.star, c.mid, c.sigma_minus, g, 14);
  double prev = 1e300;
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    double d = 0;
    const double T = 1 + t;
    const double a = (r1.burgers().w_minus - c.sigma_minus) * T, b = (r1.burgers().w_plus - c.sigma_minus) * T;
    for (int j = 0; j <= 4000; ++j) {
      const double xi = std::max(0.0, a - 0.5 * (b - a)) + 2 * (b - a) * j / 4000;
      d = std::max(d, (r1.eval(t, xi).value - r1.fan(t, xi)).cwiseAbs().maxCoeff());
    }
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("domain errors") {
  Gas g;
  const State a{0.1, 1, 1};
  const State b = rarefaction_curve(3, a, 0.12, g);  // wrong side of the branch
  CHECK_THROWS_AS(Rarefaction(3, a, b, -10, g, 14), DomainError);
}
