#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "inflow/composite.hpp"
#include "inflow/gas.hpp"

namespace inflow {

struct Grid {
  int N = 4096;  // cells; nodes xi_j = j dxi, j = 0..N
  double L = 100;

  double dxi() const { return L / N; }
  double xi(int j) const { return j * dxi(); }
  Eigen::ArrayXd nodes() const { return Eigen::ArrayXd::LinSpaced(N + 1, 0.0, L); }
};

struct SolutionState {
  double t = 0;
  Eigen::ArrayXd v, u, theta;
};

struct NormsRecord {
  double t = 0;
  double sup_phi = 0, sup_psi = 0, sup_theta = 0;
  double l2 = 0, h1 = 0, energy = 0;
};

struct SolverCallbacks {
  // Dirichlet data; when unset the boundary state (left) and the initial right node (right) are held fixed.
  std::function<State(double)> left, right;
  // Source added to the (v, u, E) equations, E = R theta/(gamma-1) + u^2/2.
  std::function<Eigen::Vector3d(double, double)> forcing;
  // Called at t = 0, at each requested output time and at t_final.
  std::function<void(const SolutionState&)> observer;
  std::vector<double> output_times;
};

struct SolverOptions {
  double cfl = 0.4;
  std::optional<double> sigma;  // defaults to -u_-/v_- of the boundary state
  double compat_tol = 1e-8;
  double dt_min = 1e-12;
  long max_steps = 50'000'000;
};

struct SolverStats {
  long steps = 0;
  double dt_last = 0;
};

double stable_dt(const SolutionState& s, const Gas& g, const Grid& grid, double sigma, double cfl);

// Method of lines for the half-line problem in the xi frame; returns the states passed to the observer.
std::vector<SolutionState> integrate(const SolutionState& initial, const State& boundary, const Gas& g,
                                     const Grid& grid, double t_final, const SolverCallbacks& cb = {},
                                     const SolverOptions& opt = {}, SolverStats* stats = nullptr);

// Phi(eta) = eta - ln(eta) - 1
double relative_entropy(double eta);

NormsRecord perturbation_norms(const SolutionState& s, const CompositeField& c, const Gas& g, const Grid& grid);

// Smallest L covering every wave at t_final with a 20% margin.
double domain_length(const WaveParts& parts, double t_final);

// Largest |xi-derivative| of the moving waves (rarefactions and contact) at xi. The stationary layer is excluded.
double component_derivative(const WaveParts& parts, double t, double xi);

struct BumpSpec {
  double h1_size = 0.01;  // H1 norm of the added perturbation triple
  double center = 60;
  double half_width = 40;
  double ramp = 20;  // length of the compatibility ramp at xi = 0
};

// Unit-height C2 bump on [center - half_width, center + half_width], cut off smoothly near xi = 0.
double bump_shape(double xi, const BumpSpec& b);

// Composite at t = 0, plus a ramp that makes the data equal the boundary state at xi = 0, plus the bump.
SolutionState initial_data(const WaveParts& parts, const Grid& grid, const BumpSpec& bump);

}  // namespace inflow
