#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "inflow/errors.hpp"

namespace inflow::num {

// Dormand-Prince 5(4) with the Hairer dense-output extension. Works in either
// direction of the independent variable.
template <int N>
class Dopri5 {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;
  using Rhs = std::function<Vec(double, const Vec&)>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-16;
    double h0 = 1e-3;
    double hmax = std::numeric_limits<double>::infinity();
    long max_steps = 100'000'000;
  };

  Dopri5(Rhs f, Options o) : f_(std::move(f)), opt_(o) {}

  void reset(double t, const Vec& y) {
    t_ = t;
    y_ = y;
    k1_ = f_(t, y);
    h_ = 0;
    err_old_ = 1e-4;
    steps_ = 0;
  }

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  const Vec& dy() const { return k1_; }
  double t_prev() const { return t_old_; }
  const Vec& y_prev() const { return y_old_; }
  const Vec& dy_prev() const { return k1_old_; }
  long steps() const { return steps_; }

  // One accepted step toward t_bound; never overshoots it.
  void step(double t_bound) {
    const double dir = t_bound >= t_ ? 1.0 : -1.0;
    if (h_ == 0) h_ = opt_.h0;
    double h = std::min(std::abs(h_), opt_.hmax);
    for (;;) {
      if (++steps_ > opt_.max_steps) throw ConvergenceFailure("ODE integrator exceeded max_steps");
      bool last = false;
      if (h >= std::abs(t_bound - t_)) {
        h = std::abs(t_bound - t_);
        last = true;
      }
      const double hs = dir * h;
      if (t_ + hs == t_) throw ConvergenceFailure("ODE step size underflow");
      Vec k2 = f_(t_ + c2 * hs, y_ + hs * (a21 * k1_));
      Vec k3 = f_(t_ + c3 * hs, y_ + hs * (a31 * k1_ + a32 * k2));
      Vec k4 = f_(t_ + c4 * hs, y_ + hs * (a41 * k1_ + a42 * k2 + a43 * k3));
      Vec k5 = f_(t_ + c5 * hs, y_ + hs * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
      Vec k6 = f_(t_ + hs, y_ + hs * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Vec ynew = y_ + hs * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      double tnew = last ? t_bound : t_ + hs;
      Vec k7 = f_(tnew, ynew);
      Vec e = hs * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = 0;
      for (int i = 0; i < y_.size(); ++i) {
        const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y_(i)), std::abs(ynew(i)));
        err += (e(i) / sc) * (e(i) / sc);
      }
      err = std::sqrt(err / double(y_.size()));
      if (!std::isfinite(err)) {
        h *= 0.2;
        continue;
      }
      if (err <= 1.0) {
        // PI controller (Hairer's beta = 0.04)
        double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_old_, 0.04);
        fac = std::clamp(fac, 0.2, 10.0);
        err_old_ = std::max(err, 1e-4);
        r1_ = y_;
        r2_ = ynew - y_;
        r3_ = hs * k1_ - r2_;
        r4_ = r2_ - hs * k7 - r3_;
        r5_ = hs * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        t_old_ = t_;
        y_old_ = y_;
        k1_old_ = k1_;
        h_last_ = hs;
        t_ = tnew;
        y_ = ynew;
        k1_ = k7;
        if (!last) h_ = h * fac;
        return;
      }
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

  // Continuous extension over the last accepted step.
  Vec dense(double t) const {
    const double s = (t - t_old_) / h_last_;
    const double s1 = 1 - s;
    return r1_ + s * (r2_ + s1 * (r3_ + s * (r4_ + s1 * r5_)));
  }

  // Dense-output coefficients of the last accepted step, detachable from the integrator.
  struct Segment {
    double t0 = 0, h = 1;
    Vec r1, r2, r3, r4, r5;
    Vec at(double t) const {
      const double s = (t - t0) / h, s1 = 1 - s;
      return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
    }
  };
  Segment segment() const { return {t_old_, h_last_, r1_, r2_, r3_, r4_, r5_}; }

  // Advance exactly to t_target.
  void advance_to(double t_target) {
    while (t_ != t_target) step(t_target);
  }

 private:
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Rhs f_;
  Options opt_;
  double t_ = 0, h_ = 0, err_old_ = 1e-4, t_old_ = 0, h_last_ = 1;
  long steps_ = 0;
  Vec y_, k1_, y_old_, k1_old_, r1_, r2_, r3_, r4_, r5_;
};

// Quintic Hermite interpolant on [x0, x0+h] from value, first and second derivative at both ends.
struct Quintic {
  double c[6];
  double h;

  Quintic(double h, double y0, double d0, double s0, double y1, double d1, double s1);
  double value(double t) const;  // t in [0,1]
  double deriv(double t) const;  // d/dx
  double second(double t) const;
  double integral() const;  // over the whole interval, in x units
};

// Regularized incomplete gamma functions P(a,x), Q(a,x): series for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// exp(z^2) erfc(z) for z >= 0.
double erfcx(double z);

// Least-squares line y = slope x + intercept.
struct LineFit {
  double slope;
  double intercept;
  double r2;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Solves a tridiagonal system in place; lower/diag/upper all of length n (lower[0], upper[n-1] unused).
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                       std::vector<double>& rhs);

// Vector-valued globally adaptive Gauss-Kronrod (7/15) quadrature.
struct QuadResult {
  Eigen::ArrayXd value;
  Eigen::ArrayXd error;
  int intervals;
  bool converged;
};
using VectorIntegrand = std::function<void(double, Eigen::Ref<Eigen::ArrayXd>)>;
QuadResult integrate_gk(const VectorIntegrand& f, int m, const std::vector<double>& breaks, double rtol,
                        int max_intervals = 200000);

struct NewtonOptions {
  int max_iter = 200;
  double tol = 1e-12;       // on the infinity norm of the residual
  double step_tol = 1e-15;  // relative step size considered stagnation
  double fd_rel = 1e-7;
};
struct NewtonResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  int iterations;
  bool converged;
};
using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Damped Newton with a forward-difference Jacobian and backtracking on ||F||.
NewtonResult damped_newton(const VectorFunction& F, Eigen::VectorXd x0, const NewtonOptions& o = {});

}  // namespace inflow::num
