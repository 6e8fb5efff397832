#pragma once

#include <Eigen/Core>

#include "inflow/gas.hpp"

namespace inflow {

// Rarefaction curve of family i (1 or 3) through an anchor, without the admissibility restriction.
// theta = theta_a (v_a/v)^(gamma-1); u = u_a - int_{v_a}^{v} lambda_i(eta, s_a) d eta.
template <typename Scalar>
ThermoState<Scalar> rarefaction_curve(int i, const ThermoState<Scalar>& a, Scalar v, const GasParams<Scalar>& g) {
  using std::pow;
  using std::sqrt;
  if (i != 1 && i != 3) throw DomainError("rarefaction family must be 1 or 3");
  check_state(a);
  if (!(v > 0)) throw DomainError("rarefaction curve: v must be positive");
  const Scalar sgn = i == 1 ? Scalar(-1) : Scalar(1);
  const Scalar gm1 = g.gamma - 1, beta = gm1 / 2;
  const Scalar K = sqrt(g.R * g.gamma * a.theta * pow(a.v, gm1));
  const Scalar theta = a.theta * pow(a.v / v, gm1);
  const Scalar u = a.u - sgn * K / beta * (pow(a.v, -beta) - pow(v, -beta));
  return {v, u, theta};
}

// Volume on the i-curve through a where the velocity equals u.
template <typename Scalar>
Scalar rarefaction_volume_at_velocity(int i, const ThermoState<Scalar>& a, Scalar u, const GasParams<Scalar>& g) {
  using std::pow;
  using std::sqrt;
  const Scalar sgn = i == 1 ? Scalar(-1) : Scalar(1);
  const Scalar gm1 = g.gamma - 1, beta = gm1 / 2;
  const Scalar K = sqrt(g.R * g.gamma * a.theta * pow(a.v, gm1));
  const Scalar base = pow(a.v, -beta) + (u - a.u) * beta / (sgn * K);
  if (!(base > 0)) throw InvalidStrengths("velocity not reachable on the rarefaction curve");
  return pow(base, -1 / beta);
}

// Admissible branch with the anchor as the LEFT state: v >= v_a for i = 1, v <= v_a for i = 3.
template <typename Scalar>
ThermoState<Scalar> rarefaction_branch(int i, const ThermoState<Scalar>& a, Scalar v, const GasParams<Scalar>& g) {
  if (i == 1 && v < a.v) throw DomainError("1-rarefaction branch requires v >= v_anchor");
  if (i == 3 && v > a.v) throw DomainError("3-rarefaction branch requires v <= v_anchor");
  return rarefaction_curve(i, a, v, g);
}

// Contact partner at temperature theta: same u and p, v from theta / v constant.
template <typename Scalar>
ThermoState<Scalar> contact_partner(const ThermoState<Scalar>& s, Scalar theta) {
  if (!(theta > 0)) throw InvalidStrengths("contact: theta must be positive");
  return {s.v * theta / s.theta, s.u, theta};
}

struct Strengths {
  double b = 0;
  double r1 = 0;
  double d = 0;
  double r3 = 0;
  double total = 0;  // |(v+ - v-, u+ - u-, theta+ - theta-)|
};

struct CaseSetup {
  State left;
  State right;
  State star;     // (v_*, u_*, theta_*): transonic, end of the boundary layer
  State mid;      // (v_m, u_m, theta_m): between 1-rarefaction and contact
  State star_up;  // (v^*, u^*, theta^*): between contact and 3-rarefaction
  double sigma_minus = 0;
  Strengths strengths;
};

using ResidualVector = Eigen::Matrix<double, 9, 1>;

// Relative residuals of the nine medium-state relations; entry 8 is the trajectory distance.
ResidualVector case_residuals(const CaseSetup& c, const Gas& g);

// Strengths implied by the states of c.
Strengths measure_strengths(const CaseSetup& c);

struct StrengthInput {
  double b = 0;
  double r1 = 0;
  double d = 0;
  double r3 = 0;
};

CaseSetup generate_case(const State& right, const StrengthInput& s, const Gas& g);

struct MediumSolveInfo {
  int iterations = 0;
  bool used_continuation = false;
};

CaseSetup solve_medium_states(const State& left, const State& right, const Gas& g, MediumSolveInfo* info = nullptr);

}  // namespace inflow
