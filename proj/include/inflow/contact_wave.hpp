#pragma once

#include <Eigen/Core>

#include "inflow/gas.hpp"
#include "inflow/rarefaction.hpp"
#include "inflow/wave_curves.hpp"

namespace inflow {

// Self-similar solution f(eta) of -(eta/2) f' = a (f'/f)', f(-inf) = theta_left, f(+inf) = theta_right.
struct SelfSimilarProfile {
  Eigen::ArrayXd eta;
  Eigen::ArrayXd Theta_sim;
  Eigen::ArrayXd dTheta_sim;
  Eigen::ArrayXd dev_left;   // Theta_sim - theta_left
  Eigen::ArrayXd dev_right;  // Theta_sim - theta_right
  double a_diff = 1;
  double eta_max = 12;
  double theta_left = 1;
  double theta_right = 1;

  struct Point {
    double f, g, f2, f3;  // f and its first three eta-derivatives
    double dev_left, dev_right;
  };
  Point eval(double eta) const;
  double bvp_residual() const;  // max of |-(eta/2) f' - a (f'/f)'| at interval midpoints
  bool trivial() const { return theta_left == theta_right; }
};

double default_eta_max(double a_diff);

// Central-difference Newton solve with continuation in the endpoint gap; N intervals on [-eta_max, eta_max].
SelfSimilarProfile solve_selfsimilar_fd(double theta_left, double theta_right, double a_diff, double eta_max,
                                        int N = 4800);

// FD solve followed by a shooting refinement that resolves the Gaussian tails to full relative accuracy.
SelfSimilarProfile solve_selfsimilar(double theta_left, double theta_right, double a_diff, double eta_max = 0);

// Diffusion coefficient (gamma-1) kappa p / (R^2 gamma).
double contact_diffusion(double p, const Gas& g);

// Viscous contact wave between mid (left) and star_up (right), in the xi frame.
class ContactWave {
 public:
  ContactWave() = default;
  ContactWave(const CaseSetup& c, const Gas& g);
  ContactWave(SelfSimilarProfile prof, const CaseSetup& c, const Gas& g);

  // Optional Hd receives the energy-equation residual of the contact wave.
  WavePoint eval(double t, double xi, double* Hd = nullptr) const;

  const SelfSimilarProfile& profile() const { return prof_; }
  double pressure() const { return p_; }
  double correction_coefficient() const { return k_; }

 private:
  SelfSimilarProfile prof_;
  State left_, right_;
  Gas g_;
  double sigma_ = 0, p_ = 1, k_ = 0, cU_ = 0;
};

}  // namespace inflow
