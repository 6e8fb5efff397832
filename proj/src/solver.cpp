#include "inflow/solver.hpp"

#include <algorithm>
#include <cmath>

namespace inflow {

using Eigen::Array3Xd;
using Eigen::ArrayXd;

namespace {

// C2 step: 0 at s <= 0, 1 at s >= 1
double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10 + s * (-15 + 6 * s));
}

double trapz(const ArrayXd& y, double h) {
  const long n = y.size();
  if (n < 2) return 0;
  return h * (y.sum() - 0.5 * (y(0) + y(n - 1)));
}

ArrayXd gradient(const ArrayXd& y, double h) {
  const long n = y.size();
  ArrayXd d(n);
  if (n < 2) return ArrayXd::Zero(n);
  d(0) = (y(1) - y(0)) / h;
  d(n - 1) = (y(n - 1) - y(n - 2)) / h;
  for (long i = 1; i + 1 < n; ++i) d(i) = (y(i + 1) - y(i - 1)) / (2 * h);
  return d;
}

double h1_of(const ArrayXd& a, const ArrayXd& b, const ArrayXd& c, double h) {
  const ArrayXd da = gradient(a, h), db = gradient(b, h), dc = gradient(c, h);
  return std::sqrt(trapz(a.square() + b.square() + c.square(), h) +
                   trapz(da.square() + db.square() + dc.square(), h));
}

struct Mol {
  const Gas& g;
  double h, sigma;
  std::function<Eigen::Vector3d(double, double)> forcing;

  // Q rows: v, u, E. Boundary rows of the result are left at zero.
  void rhs(const Array3Xd& Q, double t, Array3Xd& dQ) const {
    const long n = Q.cols();
    const double cv = g.R / (g.gamma - 1);
    ArrayXd v = Q.row(0), u = Q.row(1);
    ArrayXd th = (Q.row(2).transpose() - 0.5 * u.square()) / cv;
    ArrayXd p = g.R * th / v, pu = p * u;
    // face fluxes j+1/2
    ArrayXd tau(n - 1), heat(n - 1);
    for (long j = 0; j + 1 < n; ++j) {
      const double vf = 0.5 * (v(j) + v(j + 1)), uf = 0.5 * (u(j) + u(j + 1));
      const double tf = g.mu * (u(j + 1) - u(j)) / (h * vf);
      tau(j) = tf;
      heat(j) = g.kappa * (th(j + 1) - th(j)) / (h * vf) + uf * tf;
    }
    dQ.setZero(3, n);
    for (long j = 1; j + 1 < n; ++j) {
      dQ(0, j) = sigma * (v(j) - v(j - 1)) / h + (u(j + 1) - u(j - 1)) / (2 * h);
      dQ(1, j) = sigma * (u(j) - u(j - 1)) / h - (p(j + 1) - p(j - 1)) / (2 * h) + (tau(j) - tau(j - 1)) / h;
      dQ(2, j) = sigma * (Q(2, j) - Q(2, j - 1)) / h - (pu(j + 1) - pu(j - 1)) / (2 * h) + (heat(j) - heat(j - 1)) / h;
    }
    if (forcing)
      for (long j = 1; j + 1 < n; ++j) dQ.col(j) += forcing(t, j * h).array();
  }
};

Eigen::Array3d conserved(const State& s, const Gas& g) {
  return {s.v, s.u, g.R / (g.gamma - 1) * s.theta + 0.5 * s.u * s.u};
}

SolutionState unpack(const Array3Xd& Q, double t, const Gas& g) {
  SolutionState s;
  s.t = t;
  s.v = Q.row(0).transpose();
  s.u = Q.row(1).transpose();
  s.theta = (Q.row(2).transpose() - 0.5 * s.u.square()) * (g.gamma - 1) / g.R;
  return s;
}

void check_positive(const Array3Xd& Q, double t, const Gas& g) {
  const double cv = g.R / (g.gamma - 1);
  for (long j = 0; j < Q.cols(); ++j) {
    const double th = (Q(2, j) - 0.5 * Q(1, j) * Q(1, j)) / cv;
    if (!(Q(0, j) > 0) || !(th > 0))
      throw PositivityViolation("v or theta lost positivity at node " + std::to_string(j) + ", t = " +
                                std::to_string(t));
  }
}

}  // namespace

double stable_dt(const SolutionState& s, const Gas& g, const Grid& grid, double sigma, double cfl) {
  const double h = grid.dxi();
  const double lam = (std::abs(sigma) + (g.R * g.gamma * s.theta).sqrt() / s.v).maxCoeff();
  const double diff = std::max(g.mu, g.kappa * (g.gamma - 1) / g.R);
  return cfl * std::min(h / lam, h * h * s.v.minCoeff() / (2 * diff));
}

std::vector<SolutionState> integrate(const SolutionState& initial, const State& boundary, const Gas& g,
                                     const Grid& grid, double t_final, const SolverCallbacks& cb,
                                     const SolverOptions& opt, SolverStats* stats) {
  g.validate();
  const long n = grid.N + 1;
  if (grid.N < 2 || !(grid.L > 0)) throw ConfigError("grid needs N >= 2 and L > 0");
  if (initial.v.size() != n || initial.u.size() != n || initial.theta.size() != n)
    throw DomainError("initial data does not match the grid");
  if (!(boundary.u > 0)) throw DomainError("inflow requires u_- > 0");
  check_state(boundary);
  if ((initial.v <= 0).any() || (initial.theta <= 0).any())
    throw PositivityViolation("initial data must have v > 0 and theta > 0");
  const double scale = std::max({1.0, boundary.v, std::abs(boundary.u), boundary.theta});
  const double mismatch = std::max({std::abs(initial.v(0) - boundary.v), std::abs(initial.u(0) - boundary.u),
                                    std::abs(initial.theta(0) - boundary.theta)});
  if (mismatch > opt.compat_tol * scale)
    throw DomainError("initial data is not compatible with the boundary state at xi = 0");

  const double sigma = opt.sigma.value_or(-boundary.u / boundary.v);
  const double h = grid.dxi();
  const State far{initial.v(n - 1), initial.u(n - 1), initial.theta(n - 1)};
  auto apply_bc = [&](Array3Xd& Q, double t) {
    Q.col(0) = conserved(cb.left ? cb.left(t) : boundary, g);
    Q.col(n - 1) = conserved(cb.right ? cb.right(t) : far, g);
  };

  std::vector<double> outs;
  for (double t : cb.output_times)
    if (t > initial.t && t < t_final) outs.push_back(t);
  std::sort(outs.begin(), outs.end());
  outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
  outs.push_back(t_final);

  Array3Xd Q(3, n);
  Q.row(0) = initial.v.transpose();
  Q.row(1) = initial.u.transpose();
  Q.row(2) = (g.R / (g.gamma - 1) * initial.theta + 0.5 * initial.u.square()).transpose();
  double t = initial.t;
  apply_bc(Q, t);

  std::vector<SolutionState> traj;
  auto emit = [&]() {
    traj.push_back(unpack(Q, t, g));
    if (cb.observer) cb.observer(traj.back());
  };
  emit();

  const Mol mol{g, h, sigma, cb.forcing};
  Array3Xd k(3, n), Q1(3, n), Q2(3, n);
  long steps = 0;
  double dt = 0;
  for (double target : outs) {
    while (t < target) {
      if (++steps > opt.max_steps) throw ConvergenceFailure("solver exceeded max_steps");
      dt = stable_dt(unpack(Q, t, g), g, grid, sigma, opt.cfl);
      if (!(dt >= opt.dt_min * std::max(1.0, t))) throw CflCollapse("time step collapsed at t = " + std::to_string(t));
      bool last = false;
      if (t + dt >= target || target - (t + dt) < 1e-9 * dt) {
        dt = target - t;
        last = true;
      }
      // SSP-RK3
      mol.rhs(Q, t, k);
      Q1 = Q + dt * k;
      apply_bc(Q1, t + dt);
      mol.rhs(Q1, t + dt, k);
      Q2 = 0.75 * Q + 0.25 * (Q1 + dt * k);
      apply_bc(Q2, t + 0.5 * dt);
      mol.rhs(Q2, t + 0.5 * dt, k);
      Q = Q / 3 + 2.0 / 3 * (Q2 + dt * k);
      t = last ? target : t + dt;
      apply_bc(Q, t);
      check_positive(Q, t, g);
    }
    emit();
  }
  if (stats) {
    stats->steps = steps;
    stats->dt_last = dt;
  }
  return traj;
}

double relative_entropy(double eta) {
  if (!(eta > 0)) throw DomainError("relative entropy needs a positive ratio");
  const double x = eta - 1;
  if (std::abs(x) < 1e-2) {
    // x - log1p(x) = sum_{k>=2} (-1)^k x^k / k
    double s = 0, xk = x * x;
    for (int k = 2; k < 14; ++k) {
      s += (k % 2 == 0 ? 1 : -1) * xk / k;
      xk *= x;
    }
    return s;
  }
  return x - std::log1p(x);
}

NormsRecord perturbation_norms(const SolutionState& s, const CompositeField& c, const Gas& g, const Grid& grid) {
  const long n = s.v.size();
  if (c.value.cols() != n || grid.N + 1 != n) throw DomainError("state and composite are on different grids");
  const double h = grid.dxi();
  const ArrayXd V = c.value.row(0).transpose(), U = c.value.row(1).transpose(), Th = c.value.row(2).transpose();
  const ArrayXd phi = s.v - V, psi = s.u - U, vth = s.theta - Th;
  NormsRecord r;
  r.t = s.t;
  r.sup_phi = phi.abs().maxCoeff();
  r.sup_psi = psi.abs().maxCoeff();
  r.sup_theta = vth.abs().maxCoeff();
  r.l2 = std::sqrt(trapz(phi.square() + psi.square() + vth.square(), h));
  r.h1 = h1_of(phi, psi, vth, h);
  ArrayXd E(n);
  for (long j = 0; j < n; ++j) {
    if (!(s.v(j) / V(j) > 0) || !(s.theta(j) / Th(j) > 0))
      throw DomainError("perturbation ratio must be positive");
    E(j) = g.R * Th(j) * relative_entropy(s.v(j) / V(j)) + 0.5 * psi(j) * psi(j) +
           g.R / (g.gamma - 1) * Th(j) * relative_entropy(s.theta(j) / Th(j));
  }
  r.energy = trapz(E, h);
  return r;
}

double domain_length(const WaveParts& w, double t_final) {
  const double T = 1 + t_final, sig = w.cs.sigma_minus;
  const double foot = w.q + 1 + 12 * std::sqrt(w.q + 1.0) + 40;
  double ext = 0;
  if (!w.r1.trivial()) ext = std::max(ext, (w.r1.burgers().w_plus - sig) * T + foot);
  if (!w.r3.trivial()) ext = std::max(ext, (w.r3.burgers().w_plus - sig) * T + foot);
  if (!w.cd.profile().trivial()) ext = std::max(ext, -sig * t_final + 2 * w.cd.profile().eta_max * std::sqrt(T));
  if (w.has_bl) ext = std::max(ext, 10 / w.bl.delta_b);
  return 1.2 * std::max(ext, 10.0);
}

double component_derivative(const WaveParts& w, double t, double xi) {
  const CompositePoint c = eval_point(w, t, xi);
  return std::max({c.r1.d1.cwiseAbs().maxCoeff(), c.d.d1.cwiseAbs().maxCoeff(), c.r3.d1.cwiseAbs().maxCoeff()});
}

double bump_shape(double xi, const BumpSpec& b) {
  const double s = (xi - b.center) / b.half_width;
  if (std::abs(s) >= 1) return 0;
  const double q = 1 - s * s;
  return q * q * q * smoothstep(xi / b.ramp);
}

SolutionState initial_data(const WaveParts& w, const Grid& grid, const BumpSpec& b) {
  const ArrayXd xi = grid.nodes();
  const CompositeField c = eval_composite(0, xi, w);
  const long n = xi.size();
  const Eigen::Vector3d corr = w.cs.left.vec() - c.value.col(0).matrix();
  ArrayXd shape(n);
  for (long j = 0; j < n; ++j) shape(j) = bump_shape(xi(j), b);
  const double unit = h1_of(shape, shape, shape, grid.dxi());
  const double amp = b.h1_size > 0 && unit > 0 ? b.h1_size / unit : 0;
  SolutionState s;
  s.v.resize(n);
  s.u.resize(n);
  s.theta.resize(n);
  for (long j = 0; j < n; ++j) {
    const double ramp = 1 - smoothstep(xi(j) / b.ramp);
    const Eigen::Vector3d val = c.value.col(j).matrix() + corr * ramp;
    s.v(j) = val(0) + amp * shape(j);
    s.u(j) = val(1) + amp * shape(j);
    s.theta(j) = val(2) + amp * shape(j);
  }
  s.v(0) = w.cs.left.v;
  s.u(0) = w.cs.left.u;
  s.theta(0) = w.cs.left.theta;
  if ((s.v <= 0).any() || (s.theta <= 0).any()) throw PositivityViolation("initial data lost positivity");
  return s;
}

}  // namespace inflow
