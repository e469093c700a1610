#pragma once

#include <array>
#include <string>

#include "ars/frame.hpp"
#include "ars/ode.hpp"
#include "ars/tracer.hpp"

namespace ars {

struct GeodesicState {
  double x = 0.0, y = 0.0, px = 0.0, py = 0.0;

  Point2 pos() const { return {x, y}; }
};

/// H = ((p.F1)^2 + (p.F2)^2) / 2; arclength parameterization is H = 1/2.
double hamiltonian(const Ars& ars, const GeodesicState& s);

struct FlowOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double h_tol = 1e-10;   // allowed H drift per unit time; one auto-retry tighter
  double py_scale = 0.0;  // 0: use max(1, |py(0)|) for the p_y error weight
};

struct Geodesic {
  OdeSolution sol;
  double t_final = 0.0;
  double h_drift = 0.0;  // max |H - H(0)| over accepted samples
  std::string source_tag;

  GeodesicState state_at(double t) const;
  GeodesicState final_state() const;
};

Geodesic flow_geodesic(const Ars& ars, GeodesicState s0, double T, FlowOptions opts = {});

/// Hamiltonian right-hand side at a state (velocity and covector rates).
std::array<double, 4> hamiltonian_rhs(const Ars& ars, const GeodesicState& s);

/// Initial covector at `point` annihilating `tangent` with H = 1/2, chosen
/// on the side selected by condition (d): p.V > 0 for V completing `tangent`
/// to a positively oriented pair under orientation_M.  side = -1 flips it.
GeodesicState transversal_covector(const Ars& ars, Point2 point, Vec2 tangent, int side);

/// Procedure-1 chart map: flows the transversal covector at curve(ybar)
/// (curve parameter value, interpolated) for time xbar.
Point2 chart_map_E(const Ars& ars, const Curve& curve, double xbar, double ybar);
GeodesicState chart_map_E_state(const Ars& ars, const Curve& curve, double xbar, double ybar);

struct VariationalFrame {
  OdeSolution sol;  // 8 states: base trajectory then its variation
  double t_final = 0.0;
  double h_drift = 0.0;
  bool has_conjugate = false;
  double first_conjugate_time = 0.0;

  /// det [ velocity | variation position block ] at time t.
  double jac_det(const Ars& ars, double t) const;
  std::array<double, 4> variation_at(double t) const;
  GeodesicState state_at(double t) const;
};

/// Integrates the linearized Hamiltonian flow along the trajectory from s0,
/// seeded with the initial variation da0; tracks the first sign change of
/// the position-block Jacobian determinant (conjugate time).
VariationalFrame variational_flow(const Ars& ars, GeodesicState s0,
                                  const std::array<double, 4>& da0, double T,
                                  FlowOptions opts = {});

}  // namespace ars
