#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "inflow/errors.hpp"

namespace inflow {

template <typename Scalar>
struct GasParams {
  Scalar R = 1;
  Scalar gamma = 1.4;
  Scalar mu = 1;
  Scalar kappa = 1;
  Scalar A = 1;

  void validate() const {
    if (!(R > 0) || !(mu > 0) || !(kappa > 0) || !(A > 0))
      throw DomainError("gas constants R, mu, kappa, A must be positive");
    if (!(gamma > 1)) throw DomainError("gamma must exceed 1");
  }
};

// (v, u, theta): specific volume, velocity, temperature.
template <typename Scalar>
struct ThermoState {
  Scalar v = 1;
  Scalar u = 0;
  Scalar theta = 1;

  Eigen::Matrix<Scalar, 3, 1> vec() const { return {v, u, theta}; }
  static ThermoState from_vec(const Eigen::Matrix<Scalar, 3, 1>& x) { return {x(0), x(1), x(2)}; }
};

using Gas = GasParams<double>;
using State = ThermoState<double>;

template <typename Scalar>
struct Eos {
  Scalar p;
  Scalar e;
  Scalar s;
};

template <typename Scalar>
struct CharSpeeds {
  Scalar lambda1;
  Scalar lambda2;
  Scalar lambda3;
  Scalar c;  // sqrt(R gamma theta), Lagrangian sound speed times v
};

enum class Regime { subsonic, transonic, supersonic };

struct SonicRegion {
  Regime regime;
  bool positive;  // u > 0; u <= 0 is the "-" branch
  double mach;

  std::string tag() const;
  bool operator==(const SonicRegion& o) const { return regime == o.regime && positive == o.positive; }
};

inline constexpr double kTransonicTol = 1e-9;

template <typename Scalar>
void check_state(const ThermoState<Scalar>& s) {
  using std::isfinite;
  if (!(s.v > 0) || !(s.theta > 0) || !isfinite(s.u))
    throw DomainError("state requires v > 0 and theta > 0");
}

template <typename Scalar>
Scalar pressure(const ThermoState<Scalar>& s, const GasParams<Scalar>& g) {
  return g.R * s.theta / s.v;
}

template <typename Scalar>
Scalar entropy(Scalar v, Scalar theta, const GasParams<Scalar>& g) {
  using std::log;
  // p v^gamma = A exp((gamma-1)s/R), p = R theta / v
  return g.R / (g.gamma - 1) * log(g.R * theta * pow(v, g.gamma - 1) / g.A);
}

template <typename Scalar>
Eos<Scalar> eval_eos(const ThermoState<Scalar>& s, const GasParams<Scalar>& g) {
  check_state(s);
  return {pressure(s, g), g.R * s.theta / (g.gamma - 1), entropy(s.v, s.theta, g)};
}

// Inverse of eval_eos on (p, s): recovers (v, theta) for a given velocity.
template <typename Scalar>
ThermoState<Scalar> state_from_pressure_entropy(Scalar p, Scalar s, Scalar u, const GasParams<Scalar>& g) {
  using std::exp;
  using std::pow;
  if (!(p > 0)) throw DomainError("pressure must be positive");
  const Scalar v = pow(g.A * exp((g.gamma - 1) * s / g.R) / p, 1 / g.gamma);
  return {v, u, p * v / g.R};
}

template <typename Scalar>
Scalar sound_speed(Scalar theta, const GasParams<Scalar>& g) {
  using std::sqrt;
  return sqrt(g.R * g.gamma * theta);
}

template <typename Scalar>
CharSpeeds<Scalar> char_speeds(const ThermoState<Scalar>& s, const GasParams<Scalar>& g) {
  check_state(s);
  const Scalar c = sound_speed(s.theta, g);
  return {-c / s.v, Scalar(0), c / s.v, c};
}

template <typename Scalar>
Scalar mach(const ThermoState<Scalar>& s, const GasParams<Scalar>& g) {
  using std::abs;
  check_state(s);
  return abs(s.u) / sound_speed(s.theta, g);
}

inline SonicRegion classify(const State& s, const Gas& g) {
  const double M = mach(s, g);
  Regime r = Regime::subsonic;
  if (std::abs(M - 1) <= kTransonicTol) r = Regime::transonic;
  else if (M > 1) r = Regime::supersonic;
  return {r, s.u > 0, M};
}

inline std::string SonicRegion::tag() const {
  const char* base = regime == Regime::subsonic ? "subsonic" : regime == Regime::transonic ? "transonic" : "supersonic";
  return std::string(base) + (positive ? "+" : "-");
}

}  // namespace inflow
