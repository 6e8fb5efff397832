#include "inflow/boundary_layer.hpp"

#include <algorithm>
#include <cmath>

#include "inflow/numerics.hpp"

namespace inflow {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using Integrator = num::Dopri5<2>;

const char* to_string(BLExistence e) {
  switch (e) {
    case BLExistence::none: return "none";
    case BLExistence::transonic: return "transonic";
    case BLExistence::subsonic: return "subsonic";
  }
  return "?";
}

BLExistence bl_existence(const State& target, const Gas& g) {
  check_state(target);
  if (target.u <= 0) return BLExistence::none;
  const SonicRegion r = classify(target, g);
  if (r.regime == Regime::transonic) return BLExistence::transonic;
  if (r.regime == Regime::subsonic) return BLExistence::subsonic;
  return BLExistence::none;
}

Vector2d BLSystem::rhs(const Vector2d& y) const {
  const double u = target.u, v = target.v, th = target.theta;
  const double R = gas.R, mu = gas.mu, ka = gas.kappa, gm1 = gas.gamma - 1;
  const double s = sigma(), p = R * th / v;
  const double a = y(0), b = y(1);
  const double V = (u + a) * v / u;
  // theta - theta V / v = -theta a / u
  const double f1 = -(s / mu) * V * a + (R / mu) * (b - th * a / u);
  const double f2 = -(R * s / (ka * gm1)) * V * b + (p / ka) * V * a + (s / (2 * ka)) * V * a * a;
  return {f1, f2};
}

Matrix2d BLSystem::jacobian(const Vector2d& y) const {
  const double u = target.u, v = target.v, th = target.theta;
  const double R = gas.R, mu = gas.mu, ka = gas.kappa, gm1 = gas.gamma - 1;
  const double s = sigma(), p = R * th / v;
  const double a = y(0), b = y(1);
  const double V = (u + a) * v / u, Va = v / u;
  Matrix2d J;
  J(0, 0) = -(s / mu) * (V + a * Va) - R * th / (mu * u);
  J(0, 1) = R / mu;
  J(1, 0) = -(R * s / (ka * gm1)) * Va * b + (p / ka) * (V + a * Va) + (s / (2 * ka)) * (2 * a * V + a * a * Va);
  J(1, 1) = -(R * s / (ka * gm1)) * V;
  return J;
}

SaddleData saddle_data(const State& target, const Gas& g) {
  const BLSystem sys(target, g);
  const Matrix2d J = sys.jacobian(Vector2d::Zero());
  const double tr = J.trace(), det = J.determinant();
  SaddleData d;
  const double u = target.u, th = target.theta;
  d.tangent_quoted = Vector2d(g.kappa * (g.gamma - 1), g.mu * u).normalized();
  auto eigvec = [&](double lam) {
    // first row: J00 e0 + J01 e1 = lam e0
    Vector2d e(1.0, (lam - J(0, 0)) / J(0, 1));
    return e.normalized();
  };
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
  if (bl_existence(target, g) == BLExistence::transonic) {
    d.transonic = true;
    d.lamJ1 = tr;
    d.lamJ2 = 0;
    d.e1 = eigvec(tr);
    // null direction, exact at M = 1: (1, -(gamma-1) theta / u)
    d.e2 = Vector2d(1.0, -(g.gamma - 1) * th / u).normalized();
    return d;
  }
  d.lamJ1 = 0.5 * (tr + disc);
  d.lamJ2 = 0.5 * (tr - disc);
  d.e1 = eigvec(d.lamJ1);
  d.e2 = eigvec(d.lamJ2);
  d.a2 = -g.R / (g.mu * (d.lamJ1 - d.lamJ2));
  const double M2 = std::pow(mach(target, g), 2);
  const double B = (M2 * g.gamma - 1) / (M2 * g.R * g.gamma) - g.mu / (g.kappa * (g.gamma - 1));
  const double C = -g.mu / (M2 * g.R * g.gamma * g.kappa);
  const double sq = std::sqrt(B * B - 4 * C);
  d.c2_roots = {0.5 * (-B + sq), 0.5 * (-B - sq)};
  // the quoted line (1 + a2 c2 u)(U-u) - a2 (Theta-theta) = 0 has slope (1 + a2 c2 u)/a2
  const double slope2 = d.e2(1) / d.e2(0);
  for (int k = 0; k < 2; ++k) {
    const double sl = (1 + d.a2 * d.c2_roots[k] * u) / d.a2;
    if (std::abs(sl - slope2) <= 1e-6 * std::max(1.0, std::abs(slope2))) d.c2_match = k;
  }
  return d;
}

double launch_distance(const State& target) { return 1e-6 * std::max(target.u, target.theta); }

namespace {

Integrator::Options ode_options() {
  Integrator::Options o;
  o.rtol = 1e-10;
  o.atol = 1e-20;
  o.h0 = 1e-3;
  return o;
}

struct Launch {
  Vector2d y0;
  double eps;
  SaddleData saddle;
};

Launch make_launch(const State& target, const Gas& g) {
  const SaddleData sd = saddle_data(target, g);
  const double eps = launch_distance(target);
  // U < u side
  return {-eps * sd.e2, eps, sd};
}

bool physical(const State& target, const Vector2d& y) {
  return target.u + y(0) > 0 && target.theta + y(1) > 0 && y.allFinite();
}

// Backward integration from the launch point until |y| = delta. Returns tau_end < 0 and the endpoint.
struct Crossing {
  double tau;
  Vector2d y;
};

Crossing find_crossing(const BLSystem& sys, const Launch& L, double delta) {
  Integrator ode([&](double, const Vector2d& y) { return sys.rhs(y); }, ode_options());
  ode.reset(0.0, L.y0);
  const double tau_limit = -1e13;
  while (ode.y().norm() < delta) {
    ode.step(tau_limit);
    if (!physical(sys.target, ode.y()))
      throw LaunchFailure("boundary-layer orbit left the physical region before reaching delta_b");
    if (ode.y().norm() < 0.5 * L.eps) throw LaunchFailure("boundary-layer orbit returned to the fixed point");
    if (ode.t() <= tau_limit) throw LaunchFailure("boundary-layer orbit did not reach delta_b");
  }
  double lo = ode.t_prev(), hi = ode.t();  // |y(lo)| < delta <= |y(hi)|, lo > hi
  for (int k = 0; k < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (ode.dense(mid).norm() < delta) lo = mid;
    else hi = mid;
  }
  return {hi, ode.dense(hi)};
}

BLProfile build_profile(const State& target, double delta_b, double xi_max, const Gas& g, BLExistence tag) {
  g.validate();
  check_state(target);
  if (!(delta_b >= 0)) throw DomainError("delta_b must be nonnegative");
  const BLSystem sys(target, g);
  const Launch L = make_launch(target, g);
  BLProfile P;
  P.case_tag = tag;
  P.target = target;
  P.gas = g;
  P.sigma_minus = sys.sigma();
  P.delta_b = delta_b;
  P.decay_rate = L.saddle.transonic ? 0.0 : -L.saddle.lamJ2;

  std::vector<double> xs;
  std::vector<Vector2d> ys;
  if (delta_b <= L.eps) {
    // inside the launch ball: linear law only
    P.xi_launch = 0;
    P.launch_dev = -delta_b * L.saddle.e2;
    xs.push_back(0.0);
    ys.push_back(P.launch_dev);
    if (xi_max <= 0) xi_max = L.saddle.transonic ? 1e3 / std::max(delta_b, 1e-300) : 50 / P.decay_rate;
  } else {
    const Crossing cr = find_crossing(sys, L, delta_b);
    P.xi_launch = -cr.tau;
    P.launch_dev = L.y0;
    if (xi_max <= 0) xi_max = L.saddle.transonic ? 1e3 / delta_b : 50 / P.decay_rate;
    const double x_end = std::min(xi_max, P.xi_launch);
    // geometric node spacing
    const double h0 = L.saddle.transonic ? 0.01 : 0.02 / P.decay_rate;
    const double hcap = L.saddle.transonic ? std::numeric_limits<double>::infinity() : 0.1 / P.decay_rate;
    double x = 0, h = h0;
    while (x < x_end) {
      xs.push_back(x);
      x += std::min(h, hcap);
      h *= 1.05;
    }
    if (xs.back() < x_end) xs.push_back(x_end);
    // second pass lands on every node, from the launch point backward
    Integrator ode([&](double, const Vector2d& y) { return sys.rhs(y); }, ode_options());
    ode.reset(0.0, L.y0);
    ys.assign(xs.size(), Vector2d::Zero());
    for (std::size_t k = xs.size(); k-- > 0;) {
      const double tau = cr.tau + xs[k];
      if (k == xs.size() - 1 && x_end == P.xi_launch) {
        ys[k] = L.y0;
        continue;
      }
      ode.advance_to(k == 0 ? cr.tau : tau);
      if (!physical(target, ode.y())) throw LaunchFailure("boundary-layer orbit left the physical region");
      ys[k] = ode.y();
    }
  }
  P.xi_max = xi_max;
  const std::size_t n = xs.size();
  P.xi.resize(long(n));
  P.U.resize(long(n));
  P.Theta.resize(long(n));
  P.V.resize(long(n));
  P.dU.resize(long(n));
  P.dTheta.resize(long(n));
  P.dev_U.resize(long(n));
  P.dev_Theta.resize(long(n));
  P.d2U.resize(long(n));
  P.d2Theta.resize(long(n));
  const double ratio = target.v / target.u;
  for (std::size_t k = 0; k < n; ++k) {
    const Vector2d f = sys.rhs(ys[k]);
    const Vector2d f2 = sys.jacobian(ys[k]) * f;
    const long i = long(k);
    P.xi(i) = xs[k];
    P.dev_U(i) = ys[k](0);
    P.dev_Theta(i) = ys[k](1);
    P.U(i) = target.u + ys[k](0);
    P.Theta(i) = target.theta + ys[k](1);
    P.V(i) = P.U(i) * ratio;
    P.dU(i) = f(0);
    P.dTheta(i) = f(1);
    P.d2U(i) = f2(0);
    P.d2Theta(i) = f2(1);
  }
  P.boundary = {P.V(0), P.U(0), P.Theta(0)};
  return P;
}

}  // namespace

BLPoint BLProfile::eval(double x) const {
  const BLSystem sys(target, gas);
  const long n = xi.size();
  if (x <= 0) x = 0;
  if (x <= xi(n - 1) && n > 1) {
    const double* b = xi.data();
    long k = long(std::upper_bound(b, b + n, x) - b) - 1;
    k = std::clamp(k, 0L, n - 2);
    const double h = xi(k + 1) - xi(k), t = (x - xi(k)) / h;
    const num::Quintic qa(h, dev_U(k), dU(k), d2U(k), dev_U(k + 1), dU(k + 1), d2U(k + 1));
    const num::Quintic qb(h, dev_Theta(k), dTheta(k), d2Theta(k), dev_Theta(k + 1), dTheta(k + 1),
                          d2Theta(k + 1));
    BLPoint p;
    p.dev = {qa.value(t), qb.value(t)};
    p.d1 = sys.rhs(p.dev);
    p.d2 = sys.jacobian(p.dev) * p.d1;
    return p;
  }
  // Past the last node: algebraic (transonic) or exponential (subsonic) law matched to the last node.
  const Vector2d yN(dev_U(n - 1), dev_Theta(n - 1));
  const double yy = yN.squaredNorm();
  BLPoint p;
  if (yy == 0) {
    p.dev.setZero();
    p.d1.setZero();
    p.d2.setZero();
    return p;
  }
  const Vector2d fN = sys.rhs(yN);
  const double k = -fN.dot(yN) / yy, s = x - xi(n - 1);
  if (case_tag == BLExistence::transonic) {
    const double w = 1 / (1 + k * s);
    p.dev = yN * w;
    p.d1 = -k * yN * w * w;
    p.d2 = 2 * k * k * yN * w * w * w;
  } else {
    const double w = std::exp(-k * s);
    p.dev = yN * w;
    p.d1 = -k * yN * w;
    p.d2 = k * k * yN * w;
  }
  return p;
}

double BLProfile::ode_residual() const {
  const BLSystem sys(target, gas);
  double worst = 0;
  for (long k = 0; k + 1 < xi.size(); ++k) {
    const double h = xi(k + 1) - xi(k);
    const num::Quintic qa(h, dev_U(k), dU(k), d2U(k), dev_U(k + 1), dU(k + 1), d2U(k + 1));
    const num::Quintic qb(h, dev_Theta(k), dTheta(k), d2Theta(k), dev_Theta(k + 1), dTheta(k + 1), d2Theta(k + 1));
    const Vector2d y(qa.value(0.5), qb.value(0.5));
    const Vector2d dy(qa.deriv(0.5), qb.deriv(0.5));
    worst = std::max(worst, (dy - sys.rhs(y)).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

BLProfile solve_bl_transonic(const State& target, double delta_b, double xi_max, const Gas& g) {
  if (bl_existence(target, g) != BLExistence::transonic)
    throw InvalidRegion("transonic boundary layer requires a transonic+ target");
  if (!(delta_b > 0 && delta_b <= 0.2)) throw DomainError("delta_b must lie in (0, 0.2]");
  return build_profile(target, delta_b, xi_max, g, BLExistence::transonic);
}

BLProfile solve_bl_subsonic(const State& target, double delta_b, double xi_max, const Gas& g) {
  if (bl_existence(target, g) != BLExistence::subsonic)
    throw InvalidRegion("subsonic boundary layer requires a subsonic+ target");
  if (delta_b == 0) {
    BLProfile P;
    P.case_tag = BLExistence::subsonic;
    P.target = target;
    P.gas = g;
    P.sigma_minus = -target.u / target.v;
    P.decay_rate = -saddle_data(target, g).lamJ2;
    P.xi_max = xi_max > 0 ? xi_max : 50 / P.decay_rate;
    for (auto* a : {&P.xi, &P.dU, &P.dTheta, &P.dev_U, &P.dev_Theta, &P.d2U, &P.d2Theta}) *a = Eigen::ArrayXd::Zero(1);
    P.U = Eigen::ArrayXd::Constant(1, target.u);
    P.Theta = Eigen::ArrayXd::Constant(1, target.theta);
    P.V = Eigen::ArrayXd::Constant(1, target.v);
    P.boundary = target;
    return P;
  }
  return build_profile(target, delta_b, xi_max, g, BLExistence::subsonic);
}

Vector2d bl_endpoint(const State& target, double delta_b, const Gas& g) {
  if (bl_existence(target, g) != BLExistence::transonic)
    throw InvalidRegion("boundary-layer endpoint requires a transonic+ target");
  const Launch L = make_launch(target, g);
  const Vector2d base(target.u, target.theta);
  if (delta_b <= L.eps) return base - delta_b * L.saddle.e2;
  const BLSystem sys(target, g);
  return base + find_crossing(sys, L, delta_b).y;
}

double sigma_membership_distance(const Vector2d& candidate, const State& target, const Gas& g) {
  if (bl_existence(target, g) != BLExistence::transonic)
    throw InvalidRegion("membership distance requires a transonic+ target");
  const BLSystem sys(target, g);
  const Launch L = make_launch(target, g);
  const Vector2d c = candidate - Vector2d(target.u, target.theta);
  // straight piece from the fixed point to the launch point
  auto seg_dist = [](const Vector2d& p, const Vector2d& a, const Vector2d& b) {
    const Vector2d ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (p - (a + t * ab)).norm();
  };
  double best = seg_dist(c, Vector2d::Zero(), L.y0);
  const double reach = std::max(2 * c.norm(), 1e-3);

  Integrator ode([&](double, const Vector2d& y) { return sys.rhs(y); }, ode_options());
  ode.reset(0.0, L.y0);
  double best_node = L.y0.norm() > 0 ? (c - L.y0).norm() : 1e300;
  std::vector<Integrator::Segment> near;  // segments adjacent to the closest node
  bool take_next = true;
  while (ode.y().norm() < reach) {
    ode.step(-1e13);
    if (!physical(target, ode.y())) break;
    if (take_next) {
      near.push_back(ode.segment());
      take_next = false;
    }
    const double dn = (c - ode.y()).norm();
    if (dn < best_node) {
      best_node = dn;
      near.clear();
      near.push_back(ode.segment());
      take_next = true;
    }
    if (ode.t() <= -1e13) break;
  }
  best = std::min(best, best_node);
  // golden-section refinement on the dense output of the candidate segments
  for (const auto& s : near) {
    auto d = [&](double t) { return (c - s.at(t)).norm(); };
    double a = s.t0, b = s.t0 + s.h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a), f1 = d(x1), f2 = d(x2);
    for (int k = 0; k < 200 && std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = d(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = d(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

}  // namespace inflow
