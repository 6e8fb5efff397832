#include "inflow/contact_wave.hpp"

#include <cmath>
#include <vector>

#include "inflow/numerics.hpp"

namespace inflow {

namespace {

// f'' and f''' from the ODE f'' = f'^2/f - eta f f'/(2a)
double ode_f2(double eta, double f, double g, double a) { return g * g / f - eta * f * g / (2 * a); }

double ode_f3(double eta, double f, double g, double f2, double a) {
  return 2 * g * f2 / f - g * g * g / (f * f) - (f * g + eta * g * g + eta * f * f2) / (2 * a);
}

// int_{eta_m}^{inf} g_m exp(-theta (s^2 - eta_m^2)/(4a)) ds, and the same integral from |eta| >= eta_m
double gaussian_tail(double g_m, double eta_m, double eta, double theta, double a) {
  const double c = std::sqrt(theta / (4 * a));
  const double z = c * std::abs(eta), zm = c * eta_m;
  return g_m * std::sqrt(M_PI * a / theta) * num::erfcx(z) * std::exp(-(z * z - zm * zm));
}

SelfSimilarProfile constant_profile(double theta, double a, double eta_max) {
  SelfSimilarProfile P;
  P.a_diff = a;
  P.eta_max = eta_max;
  P.theta_left = P.theta_right = theta;
  P.eta = Eigen::ArrayXd::LinSpaced(3, -eta_max, eta_max);
  P.Theta_sim = Eigen::ArrayXd::Constant(3, theta);
  P.dTheta_sim = P.dev_left = P.dev_right = Eigen::ArrayXd::Zero(3);
  return P;
}

}  // namespace

double default_eta_max(double a_diff) { return 12 * std::max(1.0, std::sqrt(a_diff)); }

double contact_diffusion(double p, const Gas& g) { return (g.gamma - 1) * g.kappa * p / (g.R * g.R * g.gamma); }

SelfSimilarProfile::Point SelfSimilarProfile::eval(double x) const {
  Point P;
  const double a = a_diff;
  if (trivial()) return {theta_left, 0, 0, 0, 0, 0};
  const long n = eta.size();
  if (x > eta_max || x < -eta_max) {
    const bool right = x > 0;
    const double th = right ? theta_right : theta_left;
    const double gm = right ? dTheta_sim(n - 1) : dTheta_sim(0);
    P.g = gm * std::exp(-th * (x * x - eta_max * eta_max) / (4 * a));
    const double tail = gaussian_tail(gm, eta_max, x, th, a);
    if (right) {
      P.dev_right = -tail;
      P.dev_left = (theta_right - theta_left) + P.dev_right;
      P.f = theta_right + P.dev_right;
    } else {
      P.dev_left = tail;
      P.dev_right = P.dev_left - (theta_right - theta_left);
      P.f = theta_left + P.dev_left;
    }
  } else {
    const double h = eta(1) - eta(0);
    long k = long(std::floor((x - eta(0)) / h));
    k = std::clamp(k, 0L, n - 2);
    const double t = (x - eta(k)) / h;
    auto f2n = [&](long j) { return ode_f2(eta(j), Theta_sim(j), dTheta_sim(j), a); };
    auto f3n = [&](long j) { return ode_f3(eta(j), Theta_sim(j), dTheta_sim(j), f2n(j), a); };
    const double s0 = f2n(k), s1 = f2n(k + 1), c0 = f3n(k), c1 = f3n(k + 1);
    const num::Quintic qg(h, dTheta_sim(k), s0, c0, dTheta_sim(k + 1), s1, c1);
    const num::Quintic ql(h, dev_left(k), dTheta_sim(k), s0, dev_left(k + 1), dTheta_sim(k + 1), s1);
    const num::Quintic qr(h, dev_right(k), dTheta_sim(k), s0, dev_right(k + 1), dTheta_sim(k + 1), s1);
    P.g = qg.value(t);
    P.dev_left = ql.value(t);
    P.dev_right = qr.value(t);
    P.f = x <= 0 ? theta_left + P.dev_left : theta_right + P.dev_right;
  }
  P.f2 = ode_f2(x, P.f, P.g, a);
  P.f3 = ode_f3(x, P.f, P.g, P.f2, a);
  return P;
}

double SelfSimilarProfile::bvp_residual() const {
  // evaluated on the interpolant at interval midpoints: f' from the offset interpolant, f'' from the f' interpolant
  if (trivial()) return 0;
  double worst = 0;
  const double a = a_diff;
  for (long j = 0; j + 1 < eta.size(); ++j) {
    const double h = eta(j + 1) - eta(j), x = eta(j) + 0.5 * h;
    auto f2n = [&](long i) { return ode_f2(eta(i), Theta_sim(i), dTheta_sim(i), a); };
    auto f3n = [&](long i) { return ode_f3(eta(i), Theta_sim(i), dTheta_sim(i), f2n(i), a); };
    const num::Quintic qf(h, dev_left(j), dTheta_sim(j), f2n(j), dev_left(j + 1), dTheta_sim(j + 1), f2n(j + 1));
    const num::Quintic qg(h, dTheta_sim(j), f2n(j), f3n(j), dTheta_sim(j + 1), f2n(j + 1), f3n(j + 1));
    const double f = theta_left + qf.value(0.5), g = qf.deriv(0.5), f2 = qg.deriv(0.5);
    worst = std::max(worst, std::abs(-0.5 * x * g - a * (f2 / f - g * g / (f * f))));
  }
  return worst;
}

SelfSimilarProfile solve_selfsimilar_fd(double tl, double tr, double a, double eta_max, int N) {
  if (!(tl > 0 && tr > 0)) throw DomainError("self-similar endpoints must be positive");
  if (!(a > 0)) throw DomainError("diffusion coefficient must be positive");
  if (eta_max <= 0) eta_max = default_eta_max(a);
  if (N < 8 || N % 2) throw DomainError("grid size must be even and >= 8");
  if (tl == tr) return constant_profile(tl, a, eta_max);
  const double h = 2 * eta_max / N;
  std::vector<double> eta(N + 1), f(N + 1);
  for (int j = 0; j <= N; ++j) eta[j] = -eta_max + j * h;
  const int K = 4;
  for (int j = 0; j <= N; ++j) f[j] = tl + (tr - tl) / K * j / N;
  for (int step = 1; step <= K; ++step) {
    const double right = tl + (tr - tl) * step / K;
    if (step > 1)
      for (int j = 0; j <= N; ++j) f[j] = tl + (f[j] - tl) * step / (step - 1.0);
    f[0] = tl;
    f[N] = right;
    auto residual = [&](const std::vector<double>& y, std::vector<double>& r) {
      double m = 0;
      for (int j = 1; j < N; ++j) {
        r[j - 1] = a * (std::log(y[j + 1]) - 2 * std::log(y[j]) + std::log(y[j - 1])) / (h * h) +
                   0.25 * eta[j] * (y[j + 1] - y[j - 1]) / h;
        m = std::max(m, std::abs(r[j - 1]));
      }
      return m;
    };
    std::vector<double> r(N - 1), lo(N - 1), di(N - 1), up(N - 1), trial(N + 1), rt(N - 1);
    double rn = residual(f, r);
    bool converged = false;
    for (int it = 0; it < 60 && !converged; ++it) {
      for (int j = 1; j < N; ++j) {
        lo[j - 1] = a / (h * h * f[j - 1]) - 0.25 * eta[j] / h;
        di[j - 1] = -2 * a / (h * h * f[j]);
        up[j - 1] = a / (h * h * f[j + 1]) + 0.25 * eta[j] / h;
      }
      std::vector<double> dx(r.begin(), r.end());
      for (double& d : dx) d = -d;
      num::solve_tridiagonal(lo, di, up, dx);
      double lam = 1;
      double dmax = 0;
      for (double d : dx) dmax = std::max(dmax, std::abs(d));
      for (int k = 0; k < 40; ++k, lam *= 0.5) {
        trial = f;
        bool pos = true;
        for (int j = 1; j < N; ++j) {
          trial[j] = f[j] + lam * dx[j - 1];
          pos = pos && trial[j] > 0;
        }
        if (!pos) continue;
        const double rtn = residual(trial, rt);
        if (rtn < rn || lam * dmax < 1e-15 * std::max(tl, tr)) {
          f = trial;
          r = rt;
          rn = rtn;
          break;
        }
      }
      converged = lam * dmax <= 1e-14 * std::max(tl, tr);
    }
    if (!converged) throw ConvergenceFailure("self-similar Newton solve did not converge");
  }
  SelfSimilarProfile P;
  P.a_diff = a;
  P.eta_max = eta_max;
  P.theta_left = tl;
  P.theta_right = tr;
  P.eta = Eigen::Map<Eigen::ArrayXd>(eta.data(), N + 1);
  P.Theta_sim = Eigen::Map<Eigen::ArrayXd>(f.data(), N + 1);
  P.dTheta_sim.resize(N + 1);
  for (int j = 1; j < N; ++j) P.dTheta_sim(j) = (f[j + 1] - f[j - 1]) / (2 * h);
  P.dTheta_sim(0) = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  P.dTheta_sim(N) = (3 * f[N] - 4 * f[N - 1] + f[N - 2]) / (2 * h);
  P.dev_left = P.Theta_sim - tl;
  P.dev_right = P.Theta_sim - tr;
  return P;
}

SelfSimilarProfile solve_selfsimilar(double tl, double tr, double a, double eta_max) {
  if (eta_max <= 0) eta_max = default_eta_max(a);
  if (tl == tr) {
    if (!(tl > 0 && a > 0)) throw DomainError("invalid self-similar data");
    return constant_profile(tl, a, eta_max);
  }
  const SelfSimilarProfile fd = solve_selfsimilar_fd(tl, tr, a, eta_max);
  const long mid = fd.eta.size() / 2;

  // Outward shooting from eta = 0 on a uniform node set.
  const double thmax = std::max(tl, tr);
  const double hs = 0.02 * std::sqrt(4 * a / thmax);
  const int M = int(std::ceil(eta_max / hs));
  const double h = eta_max / M;
  using Ode = num::Dopri5<2>;
  Ode::Options opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-300;
  opt.h0 = 1e-3;
  auto rhs = [a](double x, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y(1), ode_f2(x, y(0), y(1), a));
  };
  std::vector<Eigen::Vector2d> nodes(2 * M + 1);
  auto shoot = [&](double f0, double g0, bool record) {
    Eigen::Vector2d ends[2];
    for (int side = 0; side < 2; ++side) {
      const double dir = side == 0 ? 1.0 : -1.0;
      Ode ode(rhs, opt);
      ode.reset(0.0, Eigen::Vector2d(f0, g0));
      if (record) nodes[M] = ode.y();
      for (int j = 1; j <= M; ++j) {
        ode.advance_to(dir * j * h);
        if (!(ode.y()(0) > 0)) throw ConvergenceFailure("self-similar shooting lost positivity");
        if (record) nodes[M + int(dir) * j] = ode.y();
      }
      ends[side] = ode.y();
    }
    return std::pair(ends[0], ends[1]);
  };
  auto F = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const auto [yp, ym] = shoot(z(0), z(1), false);
    Eigen::VectorXd r(2);
    r(0) = (yp(0) + gaussian_tail(yp(1), eta_max, eta_max, tr, a) - tr) / thmax;
    r(1) = (ym(0) - gaussian_tail(ym(1), eta_max, eta_max, tl, a) - tl) / thmax;
    return r;
  };
  Eigen::VectorXd z0(2);
  z0 << fd.Theta_sim(mid), fd.dTheta_sim(mid);
  num::NewtonOptions no;
  no.tol = 1e-14;
  no.max_iter = 50;
  const num::NewtonResult res = num::damped_newton(F, z0, no);
  if (res.residual.lpNorm<Eigen::Infinity>() > 1e-11)
    throw ConvergenceFailure("self-similar shooting did not converge");
  shoot(res.x(0), res.x(1), true);

  SelfSimilarProfile P;
  P.a_diff = a;
  P.eta_max = eta_max;
  P.theta_left = tl;
  P.theta_right = tr;
  const int n = 2 * M + 1;
  P.eta.resize(n);
  P.Theta_sim.resize(n);
  P.dTheta_sim.resize(n);
  P.dev_left.resize(n);
  P.dev_right.resize(n);
  for (int j = 0; j < n; ++j) {
    P.eta(j) = (j - M) * h;
    P.Theta_sim(j) = nodes[j](0);
    P.dTheta_sim(j) = nodes[j](1);
  }
  // plateau offsets by integrating f' inward from each end
  std::vector<double> piece(n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    const double f2a = ode_f2(P.eta(j), P.Theta_sim(j), P.dTheta_sim(j), a);
    const double f2b = ode_f2(P.eta(j + 1), P.Theta_sim(j + 1), P.dTheta_sim(j + 1), a);
    const double f3a = ode_f3(P.eta(j), P.Theta_sim(j), P.dTheta_sim(j), f2a, a);
    const double f3b = ode_f3(P.eta(j + 1), P.Theta_sim(j + 1), P.dTheta_sim(j + 1), f2b, a);
    piece[j] = num::Quintic(h, P.dTheta_sim(j), f2a, f3a, P.dTheta_sim(j + 1), f2b, f3b).integral();
  }
  double acc = gaussian_tail(P.dTheta_sim(0), eta_max, eta_max, tl, a);
  for (int j = 0; j < n; ++j) {
    P.dev_left(j) = acc;
    if (j + 1 < n) acc += piece[j];
  }
  acc = -gaussian_tail(P.dTheta_sim(n - 1), eta_max, eta_max, tr, a);
  for (int j = n - 1; j >= 0; --j) {
    P.dev_right(j) = acc;
    if (j > 0) acc -= piece[j - 1];
  }
  return P;
}

ContactWave::ContactWave(const CaseSetup& c, const Gas& g)
    : ContactWave(solve_selfsimilar(c.mid.theta, c.star_up.theta,
                                    contact_diffusion(g.R * c.star_up.theta / c.star_up.v, g)),
                  c, g) {}

ContactWave::ContactWave(SelfSimilarProfile prof, const CaseSetup& c, const Gas& g)
    : prof_(std::move(prof)), left_(c.mid), right_(c.star_up), g_(g), sigma_(c.sigma_minus) {
  p_ = g.R * right_.theta / right_.v;
  cU_ = (g.gamma - 1) * g.kappa / (g.R * g.gamma);
  // makes the momentum equation of the contact wave hold exactly
  k_ = (g.mu - cU_) / p_;
}

WavePoint ContactWave::eval(double t, double xi, double* Hd) const {
  WavePoint w;
  if (prof_.trivial()) {
    w.value = left_.vec();
    w.dev_right = left_.vec() - right_.vec();
    if (Hd) *Hd = 0;
    return w;
  }
  const double T = 1 + t, s = std::sqrt(T);
  const double x = xi + sigma_ * t, eta = x / s;
  const SelfSimilarProfile::Point P = prof_.eval(eta);
  const double R = g_.R, a = prof_.a_diff, k = k_, p = p_;
  const double corr = -k * eta * P.g / (2 * T);  // k Theta_sim_t
  const double du = cU_ * P.g / (s * P.f);
  w.dev_left = {R * P.dev_left / p, du, P.dev_left + corr};
  w.dev_right = {R * P.dev_right / p, du, P.dev_right + corr};
  w.value = eta <= 0 ? Eigen::Vector3d(left_.vec() + w.dev_left) : Eigen::Vector3d(right_.vec() + w.dev_right);
  const double q1 = -eta * P.g / (2 * a);          // (log f)''
  const double q1p = -(P.g + eta * P.f2) / (2 * a);  // (log f)'''
  const double Vx = R * P.g / (p * s), Vxx = R * P.f2 / (p * T);
  const double Ux = cU_ * q1 / T, Uxx = cU_ * q1p / (T * s);
  const double Tx = (P.g - k * (P.g + eta * P.f2) / (2 * T)) / s;
  const double Txx = (P.f2 - k * (2 * P.f2 + eta * P.f3) / (2 * T)) / T;
  w.d1 = {Vx, Ux, Tx};
  w.d2 = {Vxx, Uxx, Txx};
  if (Hd) {
    const double V = w.value(0), Th = w.value(2);
    const double Tt = -eta * P.g / (2 * T) + k * eta * (3 * P.g + eta * P.f2) / (4 * T * T);
    const double Pd = R * Th / V;
    *Hd = R / (g_.gamma - 1) * Tt + Pd * Ux - g_.kappa * (Txx / V - Tx * Vx / (V * V)) - g_.mu * Ux * Ux / V;
  }
  return w;
}

}  // namespace inflow
