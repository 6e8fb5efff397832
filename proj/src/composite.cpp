#include "inflow/composite.hpp"

#include <algorithm>
#include <cmath>

#include "inflow/numerics.hpp"

namespace inflow {

using Eigen::Vector3d;

WaveParts WaveParts::build(const CaseSetup& c, const Gas& g, int q_, double bl_xi_max) {
  g.validate();
  WaveParts w;
  w.cs = c;
  w.gas = g;
  w.q = q_;
  const double db = std::hypot(c.left.u - c.star.u, c.left.theta - c.star.theta);
  if (db > 0) {
    w.bl = solve_bl_transonic(c.star, db, bl_xi_max, g);
    w.has_bl = true;
  }
  w.r1 = Rarefaction(1, c.star, c.mid, c.sigma_minus, g, q_);
  w.cd = ContactWave(c, g);
  w.r3 = Rarefaction(3, c.star_up, c.right, c.sigma_minus, g, q_);
  return w;
}

WavePoint WaveParts::boundary_layer(double xi) const {
  WavePoint p;
  const State& s = cs.star;
  if (!has_bl) {
    p.value = s.vec();
    p.dev_left = s.vec() - cs.left.vec();
    return p;
  }
  const BLPoint b = bl.eval(xi);
  const double r = s.v / s.u;
  p.dev_right = {b.dev(0) * r, b.dev(0), b.dev(1)};
  p.value = s.vec() + p.dev_right;
  p.dev_left = p.value - cs.left.vec();
  p.d1 = {b.d1(0) * r, b.d1(0), b.d1(1)};
  p.d2 = {b.d2(0) * r, b.d2(0), b.d2(1)};
  return p;
}

CompositePoint eval_point(const WaveParts& w, double t, double xi) {
  CompositePoint c;
  c.b = w.boundary_layer(xi);
  c.r1 = w.r1.eval(t, xi);
  c.d = w.cd.eval(t, xi, &c.Hd);
  c.r3 = w.r3.eval(t, xi);
  c.value = w.cs.right.vec() + c.b.dev_right + c.r1.dev_right + c.d.dev_right + c.r3.dev_right;
  c.d1 = c.b.d1 + c.r1.d1 + c.d.d1 + c.r3.d1;
  c.d2 = c.b.d2 + c.r1.d2 + c.d.d2 + c.r3.d2;
  return c;
}

CompositeField eval_composite(double t, const Eigen::ArrayXd& xi, const WaveParts& w) {
  CompositeField f;
  f.t = t;
  f.xi = xi;
  const long n = xi.size();
  f.value.resize(3, n);
  f.d1.resize(3, n);
  f.d2.resize(3, n);
  f.points.reserve(std::size_t(n));
  for (long i = 0; i < n; ++i) {
    CompositePoint c = eval_point(w, t, xi(i));
    if (!(c.value(0) > 0) || !(c.value(2) > 0))
      throw PositivityViolation("composite wave has nonpositive V or Theta at xi = " + std::to_string(xi(i)));
    f.value.col(i) = c.value;
    f.d1.col(i) = c.d1;
    f.d2.col(i) = c.d2;
    f.points.push_back(std::move(c));
  }
  return f;
}

namespace {

// Pressure gradient, (U_xi/V)_xi, (Theta_xi/V)_xi, P U_xi and U_xi^2/V of one profile.
struct Terms {
  double Px, visc, heat, work, diss;
};

Terms terms(const Vector3d& v, const Vector3d& d1, const Vector3d& d2, const Gas& g) {
  const double V = v(0), Th = v(2), Vx = d1(0), Ux = d1(1), Tx = d1(2);
  Terms r;
  r.Px = g.R * (Tx * V - Th * Vx) / (V * V);
  r.visc = d2(1) / V - Ux * Vx / (V * V);
  r.heat = d2(2) / V - Tx * Vx / (V * V);
  r.work = g.R * Th / V * Ux;
  r.diss = Ux * Ux / V;
  return r;
}

}  // namespace

std::pair<double, double> sources_at(const CompositePoint& c, const Gas& g) {
  const Terms a = terms(c.value, c.d1, c.d2, g);
  const Terms b = terms(c.b.value, c.b.d1, c.b.d2, g);
  const Terms r1 = terms(c.r1.value, c.r1.d1, c.r1.d2, g);
  const Terms d = terms(c.d.value, c.d.d1, c.d.d2, g);
  const Terms r3 = terms(c.r3.value, c.r3.d1, c.r3.d2, g);
  const double G = (a.Px - b.Px - r1.Px - d.Px - r3.Px) - g.mu * (a.visc - b.visc - d.visc);
  const double H = (a.work - b.work - r1.work - d.work - r3.work) -
                   (g.kappa * (a.heat - b.heat - d.heat) + g.mu * (a.diss - b.diss - d.diss) - c.Hd);
  return {G, H};
}

Sources eval_sources(const CompositeField& f, const Gas& g) {
  Sources s;
  const long n = f.xi.size();
  s.G.resize(n);
  s.H.resize(n);
  for (long i = 0; i < n; ++i) std::tie(s.G(i), s.H(i)) = sources_at(f.points[std::size_t(i)], g);
  return s;
}

std::vector<double> quadrature_breaks(double t, const WaveParts& w) {
  const double T = 1 + t, sig = w.cs.sigma_minus;
  std::vector<double> br{0};
  auto window = [&](double a, double b, int pieces) {
    a = std::max(a, 0.0);
    if (!(b > a)) return;
    for (int k = 0; k <= pieces; ++k) br.push_back(a + (b - a) * k / pieces);
  };
  // Burgers characteristics leave the smoothing layer once P(q+1, x0) or Q(q+1, x0) is negligible.
  const double foot = w.q + 1 + 12 * std::sqrt(w.q + 1.0) + 40;
  if (!w.r1.trivial())
    window((w.r1.burgers().w_minus - sig) * T - 1, (w.r1.burgers().w_plus - sig) * T + foot, 48);
  if (!w.r3.trivial())
    window((w.r3.burgers().w_minus - sig) * T - 1, (w.r3.burgers().w_plus - sig) * T + foot, 48);
  if (!w.cd.profile().trivial()) {
    const double half = 2 * w.cd.profile().eta_max * std::sqrt(T);
    window(-sig * t - half, -sig * t + half, 64);
  }
  // boundary layer: geometric from the wall to well past any algebraic tail
  for (double x = 0.125; x < 1e17; x *= 2) br.push_back(x);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

InteractionReport interaction_integrals(double t, const WaveParts& w, double rtol) {
  if (!(t >= 0)) throw DomainError("interaction integrals need t >= 0");
  const Gas& g = w.gas;
  auto f = [&](double xi, Eigen::Ref<Eigen::ArrayXd> out) {
    const CompositePoint c = eval_point(w, t, xi);
    const double bx = c.b.d1(0), r1x = c.r1.d1(0), dx = c.d.d1(0), r3x = c.r3.d1(0);
    // plateau offsets taken from the stored deviations to avoid cancellation
    const double b_s = c.b.dev_right(0);  // V^b - v_*
    const double r1_s = c.r1.dev_left(0);  // V^r1 - v_*
    const double r1_m = c.r1.dev_right(0);  // V^r1 - v_m
    const double d_m = c.d.dev_left(0);  // V^d - v_m
    const double d_u = c.d.dev_right(0);  // V^d - v^*
    const double r3_u = c.r3.dev_left(0);  // V^r3 - v^*
    out(0) = std::abs(bx * r1_s) + std::abs(r1x * b_s);
    out(1) = std::abs(bx * d_m) + std::abs(dx * b_s);
    out(2) = std::abs(bx * r3_u) + std::abs(r3x * b_s);
    out(3) = std::abs(dx * r1_m) + std::abs(r1x * d_m);
    out(4) = std::abs(dx * r3_u) + std::abs(r3x * d_u);
    out(5) = std::abs(r1x * r3_u) + std::abs(r3x * r1_m);
    out(6) = std::abs(bx * dx);
    out(7) = std::abs(bx * r1x);
    out(8) = std::abs(bx * r3x);
    out(9) = std::abs(dx * r1x);
    out(10) = std::abs(dx * r3x);
    out(11) = std::abs(r1x * r3x);
    const auto [G, H] = sources_at(c, g);
    out(12) = std::abs(G);
    out(13) = std::abs(H);
    out(14) = G * G;
    out(15) = H * H;
  };
  const num::QuadResult q = num::integrate_gk(f, 16, quadrature_breaks(t, w), rtol);
  InteractionReport r;
  r.t = t;
  for (int i = 0; i < 12; ++i) r.I[std::size_t(i)] = q.value(i);
  r.G_L1 = q.value(12);
  r.H_L1 = q.value(13);
  r.G_L2 = std::sqrt(q.value(14));
  r.H_L2 = std::sqrt(q.value(15));
  // entries below ~1e-290 are governed by the 1e-300 absolute floor of the quadrature
  for (int i = 0; i < 16; ++i)
    if (q.value(i) * rtol > 1e-300) r.max_rel_error = std::max(r.max_rel_error, q.error(i) / q.value(i));
  r.converged = q.converged;
  return r;
}

}  // namespace inflow
