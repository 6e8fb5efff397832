#include "inflow/wave_curves.hpp"

#include <cmath>

#include "inflow/boundary_layer.hpp"
#include "inflow/numerics.hpp"

namespace inflow {

namespace {

double rel(double a, double b) { return (a - b) / std::max(std::abs(b), 1e-300); }

double rarefaction_velocity(int i, const State& a, double v, const Gas& g) {
  return rarefaction_curve(i, a, v, g).u;
}

// Medium states from the reduced unknowns (v^*, theta_m, v_*).
struct Medium {
  State star, mid, star_up;
};

Medium medium_from(const State& right, double v_up, double theta_m, double v_star, const Gas& g) {
  Medium m;
  m.star_up = rarefaction_curve(3, right, v_up, g);
  m.mid = contact_partner(m.star_up, theta_m);
  m.star = rarefaction_curve(1, m.mid, v_star, g);
  check_state(m.star);
  return m;
}

}  // namespace

Strengths measure_strengths(const CaseSetup& c) {
  Strengths s;
  s.b = std::hypot(c.star.u - c.left.u, c.star.theta - c.left.theta);
  s.r1 = c.mid.u - c.star.u;
  s.d = std::abs(c.star_up.theta - c.mid.theta);
  s.r3 = c.right.u - c.star_up.u;
  s.total = (c.right.vec() - c.left.vec()).norm();
  return s;
}

ResidualVector case_residuals(const CaseSetup& c, const Gas& g) {
  ResidualVector r;
  const State &L = c.left, &S = c.star, &M = c.mid, &T = c.star_up, &Rt = c.right;
  r(0) = rel(L.u / L.v, S.u / S.v);
  r(1) = rel(S.u, sound_speed(S.theta, g));
  // 1-rarefaction from star to mid, entropy taken at the curve anchor
  r(2) = rel(S.u, rarefaction_velocity(1, M, S.v, g));
  r(3) = rel(std::pow(S.v, g.gamma - 1) * S.theta, std::pow(M.v, g.gamma - 1) * M.theta);
  r(4) = rel(M.u, T.u);
  r(5) = rel(M.theta / M.v, T.theta / T.v);
  r(6) = rel(T.u, rarefaction_velocity(3, Rt, T.v, g));
  r(7) = rel(std::pow(T.v, g.gamma - 1) * T.theta, std::pow(Rt.v, g.gamma - 1) * Rt.theta);
  r(8) = sigma_membership_distance(Eigen::Vector2d(L.u, L.theta), S, g) / std::max(S.u, S.theta);
  return r;
}

CaseSetup generate_case(const State& right, const StrengthInput& s, const Gas& g) {
  g.validate();
  check_state(right);
  if (s.b < 0 || s.r1 < 0 || s.d < 0 || s.r3 < 0) throw InvalidStrengths("strengths must be nonnegative");
  CaseSetup c;
  try {
    // Walk back from the right state with the given velocity jumps.
    // absent waves copy their anchor so that zero strengths stay exact
    c.star_up = s.r3 > 0 ? rarefaction_curve(3, right, rarefaction_volume_at_velocity(3, right, right.u - s.r3, g), g)
                         : right;
    c.mid = s.d > 0 ? contact_partner(c.star_up, c.star_up.theta - s.d) : c.star_up;
    c.star = s.r1 > 0 ? rarefaction_curve(1, c.mid, rarefaction_volume_at_velocity(1, c.mid, c.mid.u - s.r1, g), g)
                      : c.mid;
    check_state(c.star_up);
    check_state(c.mid);
    check_state(c.star);
  } catch (const DomainError& e) {
    throw InvalidStrengths(std::string("intermediate state left the admissible region: ") + e.what());
  }
  // The Euler wave curves commute with a uniform velocity shift; use it to put star on the sonic line.
  const double shift = sound_speed(c.star.theta, g) - c.star.u;
  c.right = right;
  for (State* st : {&c.star, &c.mid, &c.star_up, &c.right}) st->u += shift;
  c.sigma_minus = -c.star.u / c.star.v;
  if (s.b > 0) {
    Eigen::Vector2d end;
    try {
      end = bl_endpoint(c.star, s.b, g);
    } catch (const LaunchFailure& e) {
      throw InvalidStrengths(std::string("boundary-layer strength not reachable: ") + e.what());
    }
    c.left = {end(0) * c.star.v / c.star.u, end(0), end(1)};
  } else {
    c.left = c.star;
  }
  if (!(c.left.u > 0)) throw InvalidStrengths("left state must have u > 0");
  check_state(c.left);
  c.strengths = measure_strengths(c);
  return c;
}

CaseSetup solve_medium_states(const State& left, const State& right, const Gas& g, MediumSolveInfo* info) {
  g.validate();
  check_state(left);
  check_state(right);
  if (!(left.u > 0)) throw DomainError("inflow requires u- > 0");
  const double us = std::max(left.u, left.theta);
  // unknowns z = (v^*, theta_m, v_*, delta_b)
  // Away from the solution the star is slightly off the sonic line; the trajectory is taken from its
  // sonic projection (same v, theta) and shifted back in u, which keeps F smooth.
  auto Fs = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    if (!(z(0) > 0 && z(1) > 0 && z(2) > 0 && z(3) >= 0)) throw DomainError("out of range");
    Medium m = medium_from(right, z(0), z(1), z(2), g);
    Eigen::VectorXd r(4);
    r(0) = rel(m.star.u, sound_speed(m.star.theta, g));
    r(1) = rel(m.star.u / m.star.v, left.u / left.v);
    State sonic = m.star;
    sonic.u = sound_speed(sonic.theta, g);
    const Eigen::Vector2d e = bl_endpoint(sonic, z(3), g);
    // compare in the frame of the actual star velocity
    r(2) = (e(0) - (sonic.u - m.star.u) - left.u) / us;
    r(3) = (e(1) - left.theta) / us;
    return r;
  };
  Eigen::VectorXd z0(4);
  z0 << right.v, right.theta, right.v, std::hypot(right.u - left.u, right.theta - left.theta);
  num::NewtonOptions opt;
  opt.tol = 1e-12;
  opt.max_iter = 200;
  MediumSolveInfo local;
  num::NewtonResult res{};
  bool ok = false;
  try {
    res = num::damped_newton(Fs, z0, opt);
    ok = res.converged;
    local.iterations = res.iterations;
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) {
    // Newton homotopy in the end-state gap: F(z) - (1 - lambda) F(z0) = 0, lambda = 0.1 .. 1
    local.used_continuation = true;
    const Eigen::VectorXd F0 = Fs(z0);
    Eigen::VectorXd z = z0;
    ok = true;
    for (int k = 1; k <= 10 && ok; ++k) {
      const double lam = k / 10.0;
      auto H = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return Fs(x) - (1 - lam) * F0; };
      try {
        res = num::damped_newton(H, z, opt);
      } catch (const Error&) {
        ok = false;
        break;
      }
      local.iterations += res.iterations;
      ok = res.converged;
      z = res.x;
    }
  }
  if (!ok) throw NoSolution("medium-state Newton iteration did not converge");
  const Eigen::VectorXd z = res.x;
  const Medium m = medium_from(right, z(0), z(1), z(2), g);
  CaseSetup c;
  c.left = left;
  c.right = right;
  c.star = m.star;
  c.mid = m.mid;
  c.star_up = m.star_up;
  if (classify(c.star, g).regime != Regime::transonic || !(c.star.u > 0))
    throw InvalidRegion("recovered star state is not transonic+");
  c.sigma_minus = -left.u / left.v;
  c.strengths = measure_strengths(c);
  if (info) *info = local;
  return c;
}

}  // namespace inflow
