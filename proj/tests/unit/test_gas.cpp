#include <cmath>

#include "doctest.h"
#include "inflow/gas.hpp"

using namespace inflow;

TEST_CASE("eos by direct substitution") {
  Gas g{1, 2, 1, 1, 1};
  const auto e = eval_eos(State{2, 0, 3}, g);
  CHECK(e.p == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(e.e == doctest::Approx(3).epsilon(1e-15));
  CHECK(e.s == doctest::Approx(std::log(6.0)).epsilon(1e-14));

  Gas g2{1, 5.0 / 3, 1, 1, 1};
  const auto e2 = eval_eos(State{1, 0, 1}, g2);
  CHECK(e2.p == doctest::Approx(1).epsilon(1e-15));
  CHECK(e2.e == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("eos rejects nonphysical states") {
  Gas g;
  CHECK_THROWS_AS(eval_eos(State{0, 0, 1}, g), DomainError);
  CHECK_THROWS_AS(eval_eos(State{1, 0, -1}, g), DomainError);
  CHECK_THROWS_AS(char_speeds(State{-1, 0, 1}, g), DomainError);
  Gas bad;
  bad.gamma = 1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("pressure-entropy inverse round trip") {
  Gas g{0.7, 1.4, 1, 1, 2.5};
  for (double v : {0.05, 0.3, 1.0, 7.0})
    for (double th : {0.2, 1.0, 3.3}) {
      const auto e = eval_eos(State{v, 0.4, th}, g);
      const State s = state_from_pressure_entropy(e.p, e.s, 0.4, g);
      CHECK(std::abs(s.v / v - 1) <= 1e-12);
      CHECK(std::abs(s.theta / th - 1) <= 1e-12);
    }
}

TEST_CASE("characteristic speeds") {
  Gas g{1, 2, 1, 1, 1};
  auto c = char_speeds(State{1, 0, 1}, g);
  CHECK(c.lambda1 == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c.lambda2 == 0);
  CHECK(c.lambda3 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  c = char_speeds(State{2, 0, 1}, g);
  CHECK(c.lambda1 == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(c.lambda3 == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  for (double v : {0.1, 1.0, 4.0}) {
    const auto a = char_speeds(State{v, 0, 1.3}, g), b = char_speeds(State{2 * v, 0, 1.3}, g);
    CHECK(b.lambda3 == doctest::Approx(a.lambda3 / 2).epsilon(1e-14));
    CHECK(a.lambda1 < a.lambda2);
    CHECK(a.lambda2 < a.lambda3);
  }
}

TEST_CASE("sonic classification") {
  Gas g{1, 2, 1, 1, 1};
  CHECK(classify(State{1, std::sqrt(2.0), 1}, g).tag() == "transonic+");
  CHECK(classify(State{1, 1, 1}, g).tag() == "subsonic+");
  CHECK(classify(State{1, -3, 1}, g).tag() == "supersonic-");
  // Mach number does not depend on v
  CHECK(classify(State{0.2, 1, 1}, g).mach == classify(State{5, 1, 1}, g).mach);
  CHECK(classify(State{1, std::sqrt(2.0) * (1 + 5e-10), 1}, g).regime == Regime::transonic);
  CHECK(classify(State{1, std::sqrt(2.0) * (1 + 5e-9), 1}, g).regime == Regime::supersonic);
}
