#pragma once

#include <Eigen/Core>

#include "inflow/gas.hpp"

namespace inflow {

// Value of a wave component at one point together with its offsets from both plateaus
// (computed without cancellation) and its first two xi-derivatives. Order: (V, U, Theta).
struct WavePoint {
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
  Eigen::Vector3d dev_left = Eigen::Vector3d::Zero();
  Eigen::Vector3d dev_right = Eigen::Vector3d::Zero();
  Eigen::Vector3d d1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d d2 = Eigen::Vector3d::Zero();
};

// Burgers data w_t + w w_x = 0 with w(0,x) = w_minus + (w_plus - w_minus) P(q+1, x) for x >= 0,
// w_minus for x < 0; P is the regularized lower incomplete gamma function.
struct BurgersWave {
  double w_minus = 0;
  double w_plus = 1;
  int q = 14;
  double C_q = 0;  // 1/q!

  BurgersWave() = default;
  BurgersWave(double wm, double wp, int q_);

  double w0(double x) const;
  double w0_prime(double x) const;
  double w0_second(double x) const;
};

struct BurgersPoint {
  double w;
  double dev_left;   // w - w_minus
  double dev_right;  // w - w_plus
  double wx;
  double wxx;
  double x0;  // foot of the characteristic
};

// Method-of-characteristics solution at time T and position x.
BurgersPoint burgers_solve(const BurgersWave& bw, double T, double x);
double burgers_eval(const BurgersWave& bw, double T, double x);

// Smoothed i-rarefaction connecting anchor_left to anchor_right, traveling in the xi = x - sigma_minus t frame.
class Rarefaction {
 public:
  Rarefaction() = default;
  Rarefaction(int family, const State& anchor_left, const State& anchor_right, double sigma_minus, const Gas& g,
              int q = 14);

  WavePoint eval(double t, double xi) const;
  // Centered fan in x/t with x = xi + sigma_minus t, the inviscid limit.
  Eigen::Vector3d fan(double t, double xi) const;
  double entropy_at(double v, double theta) const;

  int family() const { return i_; }
  const State& left() const { return a_; }
  const State& right() const { return b_; }
  const BurgersWave& burgers() const { return bw_; }
  double strength() const { return b_.u - a_.u; }
  bool trivial() const { return trivial_; }

 private:
  void lift(double w, double dev_a, double dev_b, double wy, double wyy, WavePoint& p) const;

  int i_ = 1;
  State a_, b_;
  double sigma_ = 0;
  Gas g_;
  BurgersWave bw_;
  double K_ = 0, sgn_ = 1;
  bool trivial_ = true;
};

}  // namespace inflow
