#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "inflow/gas.hpp"

namespace inflow {

enum class BLExistence { none, transonic, subsonic };
const char* to_string(BLExistence e);

BLExistence bl_existence(const State& target, const Gas& g);

// Stationary system for the deviations y = (U - u, Theta - theta) from the target (u, theta),
// with V = U v / u and sigma = -u / v.
struct BLSystem {
  State target;
  Gas gas;

  BLSystem(const State& t, const Gas& g) : target(t), gas(g) {}
  double sigma() const { return -target.u / target.v; }
  Eigen::Vector2d rhs(const Eigen::Vector2d& y) const;
  Eigen::Matrix2d jacobian(const Eigen::Vector2d& y) const;
};

struct SaddleData {
  bool transonic = false;
  double lamJ1 = 0;  // positive eigenvalue
  double lamJ2 = 0;  // negative (subsonic) or zero (transonic) eigenvalue
  Eigen::Vector2d e1{1, 0};  // eigenvector of lamJ1
  Eigen::Vector2d e2{1, 0};  // eigenvector of lamJ2: launch direction, oriented with positive u-component
  double a2 = 0;                          // -R / (mu (lamJ1 - lamJ2))
  std::array<double, 2> c2_roots{0, 0};   // roots of the quadratic quoted with the saddle case
  int c2_match = -1;                      // index of the root whose line matches e2, -1 if neither
  Eigen::Vector2d tangent_quoted{1, 0};   // direction of mu u (u - u+) - kappa (gamma-1)(theta - theta+) = 0
};

SaddleData saddle_data(const State& target, const Gas& g);

struct BLPoint {
  Eigen::Vector2d dev;  // (U - u, Theta - theta)
  Eigen::Vector2d d1;   // xi-derivative
  Eigen::Vector2d d2;   // second xi-derivative
};

struct BLProfile {
  BLExistence case_tag = BLExistence::transonic;
  State target;  // fixed point the layer decays to
  Gas gas;
  double delta_b = 0;
  double sigma_minus = 0;
  double xi_max = 0;
  double xi_launch = 0;  // position of the launch point; beyond it the linear law is used
  double decay_rate = 0;  // subsonic only: -lamJ2
  Eigen::Vector2d launch_dev{0, 0};
  State boundary;  // (v-, u-, theta-) at xi = 0

  Eigen::ArrayXd xi, U, Theta, V, dU, dTheta, dev_U, dev_Theta, d2U, d2Theta;

  std::size_t size() const { return std::size_t(xi.size()); }
  BLPoint eval(double x) const;
  // Max over interval midpoints of |interpolant' - rhs(interpolant)|.
  double ode_residual() const;
};

// Default lengths: 1e3/delta_b (transonic), 50/|lamJ2| (subsonic).
BLProfile solve_bl_transonic(const State& target, double delta_b, double xi_max, const Gas& g);
BLProfile solve_bl_subsonic(const State& target, double delta_b, double xi_max, const Gas& g);

// Boundary point (u-, theta-) reached at strength delta_b on the transonic trajectory, without storing a profile.
Eigen::Vector2d bl_endpoint(const State& target, double delta_b, const Gas& g);

// Distance in the (u, theta) plane from candidate to the transonic trajectory through target.
double sigma_membership_distance(const Eigen::Vector2d& candidate, const State& target, const Gas& g);

double launch_distance(const State& target);

}  // namespace inflow
