#include <cmath>

#include "doctest.h"
#include "inflow/boundary_layer.hpp"
#include "inflow/harness.hpp"

using namespace inflow;

namespace {

State sonic_state(double v, double theta, const Gas& g) { return {v, std::sqrt(g.R * g.gamma * theta), theta}; }

}  // namespace

TEST_CASE("existence classification") {
  Gas g;
  CHECK(bl_existence(State{1, -1, 1}, g) == BLExistence::none);
  CHECK(bl_existence(sonic_state(0.1, 1, g), g) == BLExistence::transonic);
  const State s = sonic_state(0.1, 1, g);
  CHECK(bl_existence(State{0.1, 0.5 * s.u, 1}, g) == BLExistence::subsonic);
  CHECK(bl_existence(State{0.1, 2 * s.u, 1}, g) == BLExistence::none);
}

TEST_CASE("transonic profile: small strength, monotonicity, mass flux, residual") {
  Gas g;
  const State t = sonic_state(0.1, 1, g);
  const Eigen::Vector2d e = bl_endpoint(t, 1e-3, g);
  CHECK(std::hypot(e(0) - t.u, e(1) - t.theta) <= 2e-3);

  const BLProfile p = solve_bl_transonic(t, 0.05, 0, g);
  CHECK(p.ode_residual() <= 1e-8);
  // U increases along the trajectory while Theta decreases
  CHECK((p.dU > 0).all());
  CHECK((p.dTheta < 0).all());
  const double flux = p.U(0) / p.V(0);
  CHECK(((p.U / p.V - flux).abs() <= 1e-12 * flux).all());
  CHECK(std::hypot(p.boundary.u - t.u, p.boundary.theta - t.theta) == doctest::Approx(0.05).epsilon(1e-8));

  // approach along the null direction of the linearization, theta - theta* = -((gamma-1) theta*/u*)(u - u*)
  const BLPoint far = p.eval(0.9 * p.xi_max);
  const double slope = far.dev(1) / far.dev(0);
  const double null_slope = -(g.gamma - 1) * t.theta / t.u;
  CHECK(std::abs(slope / null_slope - 1) <= 0.05);
  // the line mu u*(u - u*) = kappa (gamma - 1)(theta - theta*) is the eigendirection of the positive eigenvalue
  const SaddleData sd = saddle_data(t, g);
  CHECK(sd.transonic);
  CHECK(sd.lamJ1 > 0);
  const Eigen::Vector2d a = sd.tangent_quoted.normalized(), ev = sd.e1.normalized();
  CHECK(std::abs(a(0) * ev(1) - a(1) * ev(0)) <= 1e-10);
  CHECK(std::abs(a(1) / a(0) - g.mu * t.u / (g.kappa * (g.gamma - 1))) <= 1e-12 * a(1) / a(0));
}

TEST_CASE("transonic tail law") {
  Gas g;
  const State t = sonic_state(0.1, 1, g);
  for (double db : {0.02, 0.05, 0.1}) {
    const BLProfile p = solve_bl_transonic(t, db, 0, g);
    std::vector<double> x, y, yd;
    for (double xi : log_spaced(10 / db, 1000 / db, 40)) {
      const BLPoint b = p.eval(xi);
      x.push_back(1 + db * xi);
      y.push_back(std::abs(b.dev(0)));
      yd.push_back(std::abs(b.d1(0)));
    }
    CHECK(std::abs(fit_decay(x, y, FitKind::power, x.front(), x.back()).slope + 1) <= 0.15);
    CHECK(std::abs(fit_decay(x, yd, FitKind::power, x.front(), x.back()).slope + 2) <= 0.2);
  }
}

TEST_CASE("trajectory membership distance") {
  Gas g;
  const State t = sonic_state(0.1, 1, g);
  const BLProfile p = solve_bl_transonic(t, 0.1, 0, g);
  const std::size_t k = p.size() / 3;
  CHECK(sigma_membership_distance(Eigen::Vector2d(p.U(k), p.Theta(k)), t, g) <= 1e-10);
  CHECK(sigma_membership_distance(Eigen::Vector2d(t.u, t.theta), t, g) <= 1e-10);
  Eigen::Vector2d tan(p.dU(k), p.dTheta(k));
  const Eigen::Vector2d n = Eigen::Vector2d(-tan(1), tan(0)).normalized();
  const Eigen::Vector2d c = Eigen::Vector2d(p.U(k), p.Theta(k)) + 1e-3 * n;
  CHECK(std::abs(sigma_membership_distance(c, t, g) - 1e-3) <= 1e-5);
}

TEST_CASE("subsonic saddle") {
  Gas g;
  const State s = sonic_state(0.1, 1, g);
  const State t{0.1, 0.5 * s.u, 1};
  const SaddleData sd = saddle_data(t, g);
  CHECK(sd.lamJ1 * sd.lamJ2 < 0);
  // eigenvalues against a finite-difference Jacobian of the right-hand side
  const BLSystem sys(t, g);
  Eigen::Matrix2d J;
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e(j) = h;
    J.col(j) = (sys.rhs(e) - sys.rhs(-e)) / (2 * h);
  }
  const double tr = J.trace(), det = J.determinant();
  const double l1 = 0.5 * (tr + std::sqrt(tr * tr - 4 * det)), l2 = 0.5 * (tr - std::sqrt(tr * tr - 4 * det));
  CHECK(l1 == doctest::Approx(sd.lamJ1).epsilon(1e-6));
  CHECK(l2 == doctest::Approx(sd.lamJ2).epsilon(1e-6));

  const BLProfile zero = solve_bl_subsonic(t, 0, 0, g);
  CHECK(std::abs(zero.eval(3.0).dev(0)) == 0);
  const BLProfile p = solve_bl_subsonic(t, 0.05, 0, g);
  CHECK(p.ode_residual() <= 1e-8);
  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    x.push_back((5 + 35.0 * i / 40) / p.decay_rate);
    y.push_back(std::abs(p.eval(x.back()).dev(0)));
  }
  const DecaySeries f = fit_decay(x, y, FitKind::exponential, x.front(), x.back());
  CHECK(f.slope < 0);
  CHECK(f.r2 >= 0.99);
}

TEST_CASE("errors") {
  Gas g;
  const State t = sonic_state(0.1, 1, g);
  CHECK_THROWS_AS(solve_bl_transonic(t, 0.3, 0, g), DomainError);
  CHECK_THROWS_AS(solve_bl_transonic(State{0.1, 0.5, 1}, 0.05, 0, g), InvalidRegion);
  CHECK_THROWS_AS(solve_bl_subsonic(t, 0.05, 0, g), InvalidRegion);
}
