#pragma once

#include <string>

#include "ars/expr.hpp"
#include "ars/ode.hpp"

namespace ars {

/// Parameters of the F3 chart F1 = d/dx, F2 = (y - x^2 psi(x)) e^xi d/dy,
/// normalized internally to psi(0) = 1 by the rescaling y -> y/psi(0)
/// (which leaves gamma unchanged and divides alpha by psi(0)).
struct F3Params {
  FieldExpr psi;  // function of x, psi(0) != 0
  FieldExpr xi;   // function of (x, y)
  double psi0 = 1.0;   // original psi(0)
  double psi1 = 0.0;   // psi'(0) after rescaling
  double gamma = 1.0;  // e^{xi(0,0)}
  double alpha = 0.0;  // psi'(0) + dxi/dx(0,0) after rescaling
  bool alpha_zero = false;

  static F3Params make(const std::string& psi_text, const std::string& xi_text);
};

/// Solution of the rescaled-jet systems: base order (x0, y0, px0, py0),
/// first order at alpha = 0 (x10, y10, px10, py10), and the alpha-linear
/// parts (g1, g2, g3); g4 is identically zero and not integrated.
struct JetSolution {
  double gamma = 1.0;
  double K = 0.0;      // complete elliptic integral, modulus 1/sqrt(2)
  double s_bar = 0.0;  // 2K/sqrt(gamma), half period of x0
  OdeSolution sol;     // 11 states over [0, s_bar + 0.5]

  // constants at s_bar
  double x10_at = 0.0, y10_at = 0.0, g1_at = 0.0, g2_at = 0.0;
  double two_g1_plus_g2 = 0.0;
  double two_g1_plus_g2_rk4 = 0.0;  // independent fixed-step integrator

  double closed_form_max_err = 0.0;  // x0, y0 against the elliptic closed forms
  double py0_drift = 0.0;            // py0 must stay at -1/2
  double j0_min_abs = 0.0;           // min |J0| on (0, s_bar + 0.2]
  bool j0_vanishes = false;

  /// J0(s) = x0 y0' - 3 y0 x0', the leading Jacobian factor.
  double j0(double s) const;
};

JetSolution solve_model_jets(double gamma);

struct CutPrediction {
  struct Upper {
    double x_int = 0.0, y_int = 0.0, t_int = 0.0, a_bar = 0.0;
  } upper;
  bool has_lower = false;
  struct Lower {
    double eta0 = 0.0;
    double x_int = 0.0, y_int = 0.0;
    double t0 = 0.0;  // leading intersection time (2K/sqrt(gamma)) eta0
    double c_plus = 0.0, c_minus = 0.0;
    double a_bar = 0.0;
  } lower;
  // candidate for the cusp normalization constant, matched empirically from
  // the (x_int, y_int) parameterization; not asserted beyond tests
  double omega_candidate = 0.0;
};

/// Leading-order cut data on both sides of Z for the geodesic fan parameter
/// a > 0 (lower side uses eta0 = sqrt(a)).  Lower predictions require
/// alpha != 0.
CutPrediction predict_cut_coefficients(const F3Params& params, const JetSolution& jets,
                                       double a);

}  // namespace ars
