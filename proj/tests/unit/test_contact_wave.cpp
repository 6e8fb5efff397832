#include <cmath>

#include "doctest.h"
#include "inflow/contact_wave.hpp"
#include "inflow/harness.hpp"

using namespace inflow;

TEST_CASE("constant self-similar solution") {
  const SelfSimilarProfile p = solve_selfsimilar(1, 1, 1);
  CHECK(p.trivial());
  CHECK((p.Theta_sim == 1).all());
}

TEST_CASE("self-similar profile: Richardson, monotone, endpoints, residual") {
  const double eta = default_eta_max(1);
  const double a = solve_selfsimilar_fd(1, 1.05, 1, eta, 2400).eval(0).f;
  const double b = solve_selfsimilar_fd(1, 1.05, 1, eta, 4800).eval(0).f;
  CHECK(std::abs(a - b) <= 1e-6);

  const SelfSimilarProfile p = solve_selfsimilar(1, 1.05, 1);
  CHECK(p.bvp_residual() <= 1e-8);
  // strictly increasing, judged on the stored deviation from the nearer endpoint
  for (long i = 1; i < p.Theta_sim.size(); ++i) {
    CHECK(p.Theta_sim(i) >= p.Theta_sim(i - 1));
    if (p.eta(i) <= 0)
      CHECK(p.dev_left(i) > p.dev_left(i - 1));
    else
      CHECK(p.dev_right(i) > p.dev_right(i - 1));
  }
  CHECK(std::abs(p.Theta_sim(0) - 1) <= 1e-8);
  CHECK(std::abs(p.Theta_sim(p.Theta_sim.size() - 1) - 1.05) <= 1e-8);
  CHECK(p.eta_max == doctest::Approx(12));
  // self-similar solution agrees with the independent finite-difference solve
  CHECK(std::abs(p.eval(0).f - b) <= 1e-6);
}

TEST_CASE("contact field") {
  Gas g;
  const CaseSetup c = generate_case(State{0.1, 1.0, 1.0}, StrengthInput{0.02, 0.05, 0.02, 0.05}, g);
  const ContactWave cw(c, g);
  const double p = cw.pressure();
  const double sig = c.sigma_minus;
  for (double t : {0.0, 1.0, 30.0}) {
    for (double eta : {-5.0, -1.0, 0.0, 0.7, 4.0}) {
      const double xi = eta * std::sqrt(1 + t) - sig * t;
      const WavePoint w = cw.eval(t, xi);
      CHECK(std::abs(w.value(0) - g.R * cw.profile().eval(eta).f / p) <= 1e-12 * w.value(0));
    }
    const double xr = cw.profile().eta_max * std::sqrt(1 + t) - sig * t;
    CHECK((cw.eval(t, xr).value - c.star_up.vec()).cwiseAbs().maxCoeff() <= 1e-6);
  }

  // residual bound |H^d| (1+t)^2 stays bounded
  std::vector<double> m;
  for (double t : log_spaced(1, 200, 12)) {
    double hmax = 0;
    for (int i = 0; i <= 800; ++i) {
      const double eta = -12 + 24.0 * i / 800;
      double Hd = 0;
      cw.eval(t, eta * std::sqrt(1 + t) - sig * t, &Hd);
      hmax = std::max(hmax, std::abs(Hd));
    }
    m.push_back(hmax * (1 + t) * (1 + t));
  }
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  CHECK(*hi <= 2 * m.front());
  CHECK(*lo > 0);
}

TEST_CASE("zero contact strength") {
  Gas g;
  const CaseSetup c = generate_case(State{0.1, 1.0, 1.0}, StrengthInput{0.02, 0.05, 0, 0.05}, g);
  const ContactWave cw(c, g);
  for (double t : {0.0, 5.0})
    for (double xi : {0.0, 10.0, 60.0, 500.0}) {
      double Hd = 1;
      const WavePoint w = cw.eval(t, xi, &Hd);
      CHECK((w.value - c.mid.vec()).cwiseAbs().maxCoeff() == 0);
      CHECK(Hd == 0);
    }
}
