#include <cmath>

#include "doctest.h"
#include "inflow/harness.hpp"
#include "inflow/solver.hpp"

using namespace inflow;
using Eigen::ArrayXd;

namespace {

double trapz(const ArrayXd& f, double h) { return h * (f.sum() - 0.5 * (f(0) + f(f.size() - 1))); }

}  // namespace

TEST_CASE("relative entropy bounds") {
  for (int i = 0; i <= 4500; ++i) {
    const double eta = 0.8 + 0.45 * i / 4500;
    const double phi = relative_entropy(eta), q = (eta - 1) * (eta - 1);
    CHECK(phi >= q / 4);
    CHECK(phi <= q);
    if (eta != 1) CHECK(phi > 0);
  }
  CHECK(relative_entropy(1) == 0);
  CHECK(relative_entropy(1e-3) == doctest::Approx(1e-3 - std::log(1e-3) - 1).epsilon(1e-14));
  CHECK_THROWS_AS(relative_entropy(0), DomainError);
}

TEST_CASE("constant state is preserved") {
  Gas g;
  const State s{0.1, std::sqrt(1.4), 1};
  CHECK(steady_state_drift(s, g, 256, 50, 20) <= 1e-12);
}

TEST_CASE("manufactured solution errors decrease at first order") {
  Gas g;
  const auto e = manufactured_errors(g, 32, 0.5);
  REQUIRE(e.size() == 3);
  const double o1 = std::log2(e[0] / e[1]), o2 = std::log2(e[1] / e[2]);
  CHECK(e[1] < e[0]);
  CHECK(e[2] < e[1]);
  CHECK(o2 > o1);
  CHECK(std::abs(o2 - 1) < 0.1);
}

TEST_CASE("norms of the composite itself vanish") {
  Gas g;
  RunConfig c;
  const WaveParts w = WaveParts::build(make_case(c), g, 14);
  const Grid grid{512, 300};
  const CompositeField f = eval_composite(3, grid.nodes(), w);
  SolutionState s;
  s.t = 3;
  s.v = f.value.row(0).transpose();
  s.u = f.value.row(1).transpose();
  s.theta = f.value.row(2).transpose();
  const NormsRecord n = perturbation_norms(s, f, g, grid);
  CHECK(n.sup_phi == 0);
  CHECK(n.l2 == 0);
  CHECK(n.h1 == 0);
  CHECK(n.energy == 0);
  s.u(100) += 1e-3;
  const NormsRecord m = perturbation_norms(s, f, g, grid);
  CHECK(m.energy > 0);
  CHECK(m.sup_psi == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("initial data matches the boundary state and carries the bump") {
  Gas g;
  RunConfig c;
  const CaseSetup cs = make_case(c);
  const WaveParts w = WaveParts::build(cs, g, 14);
  const Grid grid{2048, domain_length(w, 200)};
  const SolutionState s = initial_data(w, grid, c.bump);
  CHECK(std::abs(s.v(0) - cs.left.v) <= 1e-14);
  CHECK(std::abs(s.u(0) - cs.left.u) <= 1e-14);
  CHECK(std::abs(s.theta(0) - cs.left.theta) <= 1e-14);

  // without a contact the composite already matches the boundary, so the perturbation is the bump alone
  const WaveParts w0 = WaveParts::build(generate_case(State{0.1, 1.0, 1.0}, StrengthInput{0.02, 0.05, 0, 0.05}, g), g, 14);
  const Grid g0{2048, domain_length(w0, 200)};
  const SolutionState s0 = initial_data(w0, g0, c.bump);
  const NormsRecord n = perturbation_norms(s0, eval_composite(0, g0.nodes(), w0), g, g0);
  CHECK(n.h1 == doctest::Approx(c.bump.h1_size).epsilon(1e-9));
}

TEST_CASE("mass bookkeeping") {
  // d/dt int phi = -sigma phi(0) - psi(0) when the perturbation vanishes at the far edge
  Gas g;
  RunConfig c;
  const CaseSetup cs = make_case(c);
  const WaveParts w = WaveParts::build(cs, g, 14);
  std::vector<double> gaps;
  for (int N : {1024, 2048}) {
    const Grid grid{N, 240};
    const ArrayXd xi = grid.nodes();
    const SolutionState s0 = initial_data(w, grid, c.bump);
    std::vector<double> ts, mass, flux;
    SolverCallbacks cb;
    cb.right = [&](double t) {
      const Eigen::Vector3d p = eval_point(w, t, grid.L).value;
      return State{p(0), p(1), p(2)};
    };
    for (int k = 1; k <= 200; ++k) cb.output_times.push_back(0.005 * k);
    cb.observer = [&](const SolutionState& s) {
      const CompositeField f = eval_composite(s.t, xi, w);
      const ArrayXd phi = s.v - f.value.row(0).transpose();
      ts.push_back(s.t);
      mass.push_back(trapz(phi, grid.dxi()));
      flux.push_back(-cs.sigma_minus * phi(0) - (s.u(0) - f.value(1, 0)));
    };
    integrate(s0, cs.left, g, grid, 1.0, cb);
    // M(t) - M(0) against the time integral of the boundary flux (trapezoid)
    double gap = 0, acc = 0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
      acc += 0.5 * (flux[i] + flux[i - 1]) * (ts[i] - ts[i - 1]);
      gap = std::max(gap, std::abs(mass[i] - mass[0] - acc));
    }
    gaps.push_back(gap);
    CHECK(std::abs(mass.back() - mass.front()) > 0);
  }
  // first-order consistency under refinement
  CHECK(gaps[1] < 0.75 * gaps[0]);
}

TEST_CASE("boundary layer is nearly stationary") {
  Gas g;
  const CaseSetup cs = generate_case(State{0.1, 1.0, 1.0}, StrengthInput{0.05, 0, 0, 0}, g);
  const WaveParts w = WaveParts::build(cs, g, 14);
  std::vector<double> drift;
  for (int N : {256, 512}) {
    const Grid grid{N, domain_length(w, 10)};
    const ArrayXd xi = grid.nodes();
    BumpSpec b;
    b.h1_size = 0;
    const SolutionState s0 = initial_data(w, grid, b);
    double d = 0;
    SolverCallbacks cb;
    cb.output_times = {2, 4, 6, 8};
    cb.observer = [&](const SolutionState& s) {
      d = std::max({d, (s.v - s0.v).abs().maxCoeff(), (s.u - s0.u).abs().maxCoeff(),
                    (s.theta - s0.theta).abs().maxCoeff()});
    };
    integrate(s0, cs.left, g, grid, 10, cb);
    drift.push_back(d);
  }
  CHECK(drift[0] > 0);
  CHECK(drift[1] < 0.75 * drift[0]);
}

TEST_CASE("solver errors") {
  Gas g;
  const Grid grid{64, 10};
  SolutionState s;
  s.v = ArrayXd::Constant(65, 0.1);
  s.u = ArrayXd::Constant(65, 1.0);
  s.theta = ArrayXd::Constant(65, 1.0);
  s.v(30) = -0.1;
  CHECK_THROWS_AS(integrate(s, State{0.1, 1.0, 1.0}, g, grid, 1), PositivityViolation);
  s.v(30) = 0.1;
  CHECK_THROWS_AS(integrate(s, State{0.1, -1.0, 1.0}, g, grid, 1), DomainError);
  CHECK_THROWS(integrate(s, State{0.2, 1.0, 1.0}, g, grid, 1));
}
