#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "inflow/boundary_layer.hpp"
#include "inflow/contact_wave.hpp"
#include "inflow/rarefaction.hpp"
#include "inflow/wave_curves.hpp"

namespace inflow {

// The four wave components of one case, built once and evaluated at any (t, xi).
struct WaveParts {
  CaseSetup cs;
  Gas gas;
  BLProfile bl;
  bool has_bl = false;
  Rarefaction r1, r3;
  ContactWave cd;
  int q = 14;

  static WaveParts build(const CaseSetup& c, const Gas& g, int q = 14, double bl_xi_max = 0);

  WavePoint boundary_layer(double xi) const;
};

struct CompositePoint {
  WavePoint b, r1, d, r3;
  Eigen::Vector3d value, d1, d2;  // superposition (V, U, Theta) and its xi-derivatives
  double Hd = 0;
};

CompositePoint eval_point(const WaveParts& parts, double t, double xi);

struct CompositeField {
  double t = 0;
  Eigen::ArrayXd xi;
  Eigen::Array3Xd value, d1, d2;  // rows V, U, Theta
  std::vector<CompositePoint> points;
};

// Superposition on a grid; throws PositivityViolation if V or Theta <= 0.
CompositeField eval_composite(double t, const Eigen::ArrayXd& xi, const WaveParts& parts);

// Residuals of the momentum and energy equations of the superposition.
std::pair<double, double> sources_at(const CompositePoint& p, const Gas& g);

struct Sources {
  Eigen::ArrayXd G, H;
};
Sources eval_sources(const CompositeField& f, const Gas& g);

struct InteractionReport {
  double t = 0;
  std::array<double, 12> I{};
  double G_L1 = 0, H_L1 = 0, G_L2 = 0, H_L2 = 0;
  double max_rel_error = 0;  // quadrature error estimate relative to each entry
  bool converged = true;
};

// Break points covering every component's support window at time t, followed by a geometric far field.
std::vector<double> quadrature_breaks(double t, const WaveParts& parts);

InteractionReport interaction_integrals(double t, const WaveParts& parts, double rtol = 1e-10);

}  // namespace inflow
