#include "inflow/rarefaction.hpp"

#include <cmath>

#include "inflow/numerics.hpp"
#include "inflow/wave_curves.hpp"

namespace inflow {

namespace {

double factorial(int q) {
  // exact in integer arithmetic up to 20!
  unsigned long long f = 1;
  for (int k = 2; k <= q; ++k) f *= static_cast<unsigned long long>(k);
  return double(f);
}

// x^q e^-x / q! without overflow
double gamma_density(int q, double x) {
  if (x <= 0) return 0;
  return std::exp(q * std::log(x) - x - std::lgamma(q + 1.0));
}

}  // namespace

BurgersWave::BurgersWave(double wm, double wp, int q_) : w_minus(wm), w_plus(wp), q(q_) {
  if (!(wp >= wm)) throw DomainError("Burgers data requires w_minus <= w_plus");
  if (q < 1 || q > 20) throw DomainError("smoothing exponent q must lie in [1, 20]");
  C_q = 1.0 / factorial(q);
}

double BurgersWave::w0(double x) const {
  if (x <= 0) return w_minus;
  const double P = num::gamma_p(q + 1.0, x);
  return P < 0.5 ? w_minus + (w_plus - w_minus) * P : w_plus - (w_plus - w_minus) * num::gamma_q(q + 1.0, x);
}

double BurgersWave::w0_prime(double x) const { return (w_plus - w_minus) * gamma_density(q, x); }

double BurgersWave::w0_second(double x) const {
  if (x <= 0) return 0;
  return (w_plus - w_minus) * gamma_density(q, x) * (q / x - 1);
}

BurgersPoint burgers_solve(const BurgersWave& bw, double T, double x) {
  if (!(T >= 0)) throw DomainError("Burgers time must be nonnegative");
  const double dw = bw.w_plus - bw.w_minus;
  if (x <= bw.w_minus * T || dw == 0) return {bw.w_minus, 0.0, -dw, 0.0, 0.0, x - bw.w_minus * T};
  const double a = bw.q + 1.0;
  // w0(x0) split as (P, Q) so both plateau offsets stay accurate
  auto split = [&](double x0, double& P, double& Q) {
    if (x0 < a + 1) {
      P = num::gamma_p(a, x0);
      Q = 1 - P;
    } else {
      Q = num::gamma_q(a, x0);
      P = 1 - Q;
    }
  };
  auto g = [&](double x0) {
    double P, Q;
    split(x0, P, Q);
    return P < 0.5 ? x0 + T * (bw.w_minus + dw * P) - x : x0 + T * (bw.w_plus - dw * Q) - x;
  };
  double lo = std::max(0.0, x - bw.w_plus * T), hi = x - bw.w_minus * T;
  double x0 = std::clamp(double(bw.q), lo, hi);
  const double tol = 1e-13 * (1 + std::abs(x));
  for (int it = 0; it < 400; ++it) {
    const double gv = g(x0);
    if (gv > 0) hi = x0;
    else lo = x0;
    const double gp = 1 + T * bw.w0_prime(x0);
    double xn = x0 - gv / gp;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    const double step = std::abs(xn - x0);
    x0 = xn;
    if (step <= tol || hi - lo <= tol) break;
  }
  double P, Q;
  split(x0, P, Q);
  const double d1 = bw.w0_prime(x0), d2 = bw.w0_second(x0);
  const double x0x = 1 / (1 + T * d1);
  BurgersPoint r;
  r.x0 = x0;
  r.dev_left = dw * P;
  r.dev_right = -dw * Q;
  r.w = P < 0.5 ? bw.w_minus + r.dev_left : bw.w_plus + r.dev_right;
  r.wx = d1 * x0x;
  r.wxx = d2 * x0x * x0x * x0x;
  return r;
}

double burgers_eval(const BurgersWave& bw, double T, double x) {
  if (T == 0) return bw.w0(x);
  return burgers_solve(bw, T, x).w;
}

Rarefaction::Rarefaction(int family, const State& anchor_left, const State& anchor_right, double sigma_minus,
                         const Gas& g, int q)
    : i_(family), a_(anchor_left), b_(anchor_right), sigma_(sigma_minus), g_(g) {
  if (family != 1 && family != 3) throw DomainError("rarefaction family must be 1 or 3");
  check_state(a_);
  check_state(b_);
  sgn_ = family == 1 ? -1.0 : 1.0;
  K_ = std::sqrt(g.R * g.gamma * a_.theta * std::pow(a_.v, g.gamma - 1));
  // anchors must share the curve
  const State on = rarefaction_curve(family, a_, b_.v, g);
  const double scale = std::max({1.0, std::abs(b_.u), b_.theta});
  if (std::abs(on.u - b_.u) > 1e-8 * scale || std::abs(on.theta - b_.theta) > 1e-8 * scale)
    throw DomainError("rarefaction anchors are not on a common branch");
  const double wl = char_speeds(a_, g).lambda1 * (family == 1) + char_speeds(a_, g).lambda3 * (family == 3);
  const double wr = char_speeds(b_, g).lambda1 * (family == 1) + char_speeds(b_, g).lambda3 * (family == 3);
  const double wtol = 1e-13 * std::max(1.0, std::abs(wl));
  if (wr < wl - wtol) throw DomainError("anchors are not on the admissible rarefaction branch");
  trivial_ = wr <= wl + wtol;
  bw_ = BurgersWave(wl, trivial_ ? wl : wr, q);
}

double Rarefaction::entropy_at(double v, double theta) const { return entropy(v, theta, g_); }

void Rarefaction::lift(double w, double dev_a, double dev_b, double wy, double wyy, WavePoint& p) const {
  const double gp1 = g_.gamma + 1, gm1 = g_.gamma - 1, beta = gm1 / 2, m = 2 / gp1;
  auto offsets = [&](const State& s, double ws, double dw) {
    const double Lg = -m * std::log1p(dw / ws);  // log(v / v_s)
    return Eigen::Vector3d(s.v * std::expm1(Lg), sgn_ * K_ / beta * std::pow(s.v, -beta) * std::expm1(-beta * Lg),
                           s.theta * std::expm1(-gm1 * Lg));
  };
  p.dev_left = offsets(a_, bw_.w_minus, dev_a);
  p.dev_right = offsets(b_, bw_.w_plus, dev_b);
  p.value = std::abs(dev_a) <= std::abs(dev_b) ? a_.vec() + p.dev_left : b_.vec() + p.dev_right;
  const double V = p.value(0), Th = p.value(2);
  const double dvdw = -m * V / w, d2vdw2 = m * (m + 1) * V / (w * w);
  const double Vx = dvdw * wy, Vxx = d2vdw2 * wy * wy + dvdw * wyy;
  const double Ux = -w * Vx, Uxx = -wy * Vx - w * Vxx;
  const double Tx = -gm1 * Th / V * Vx;
  const double Txx = -gm1 * ((Tx * V - Th * Vx) / (V * V) * Vx + Th / V * Vxx);
  p.d1 = {Vx, Ux, Tx};
  p.d2 = {Vxx, Uxx, Txx};
}

WavePoint Rarefaction::eval(double t, double xi) const {
  WavePoint p;
  if (trivial_) {
    p.value = a_.vec();
    p.dev_right = a_.vec() - b_.vec();
    return p;
  }
  const double T = 1 + t;
  const BurgersPoint bp = burgers_solve(bw_, T, xi + sigma_ * T);
  lift(bp.w, bp.dev_left, bp.dev_right, bp.wx, bp.wxx, p);
  return p;
}

Eigen::Vector3d Rarefaction::fan(double t, double xi) const {
  if (!(t > 0)) throw DomainError("centered fan needs t > 0");
  const double w = std::clamp((xi + sigma_ * t) / t, bw_.w_minus, bw_.w_plus);
  if (w == bw_.w_minus) return a_.vec();
  if (w == bw_.w_plus) return b_.vec();
  WavePoint p;
  lift(w, w - bw_.w_minus, w - bw_.w_plus, 0, 0, p);
  return p.value;
}

}  // namespace inflow
