#include "ars/modeljets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ars/elliptic.hpp"

namespace ars {

namespace {

// state: x0 y0 px0 py0 x10 y10 px10 py10 g1 g2 g3
void model_rhs(double g2c, const std::vector<double>& z, std::vector<double>& dz) {
  double x0 = z[0], y0 = z[1], px0 = z[2], py0 = z[3];
  double x10 = z[4], px10 = z[6], py10 = z[7];
  double g1 = z[8], g3 = z[10];
  double x02 = x0 * x0, x03 = x02 * x0, x04 = x02 * x02;

  dz.resize(11);
  dz[0] = px0;
  dz[1] = g2c * py0 * x04;
  dz[2] = -2.0 * g2c * py0 * py0 * x03;
  dz[3] = 0.0;
  dz[4] = px10;
  dz[5] = g2c * (py10 * x04 - 2.0 * py0 * x02 * (y0 - 2.0 * x0 * x10));
  dz[6] = g2c * py0 * x0 * (-4.0 * py10 * x02 + 2.0 * py0 * y0 - 6.0 * py0 * x0 * x10);
  dz[7] = g2c * py0 * x02;
  dz[8] = g3;
  dz[9] = -g2c * x03 * (2.0 * g1 + x02);
  dz[10] = -0.25 * g2c * x02 * (6.0 * g1 + 5.0 * x02);
}

const std::vector<double> kInit{0, 0, 1, -0.5, 1, 1, 0, 0, 0, 0, 0};

}  // namespace

F3Params F3Params::make(const std::string& psi_text, const std::string& xi_text) {
  F3Params p;
  p.psi = parse_field(psi_text);
  p.xi = parse_field(xi_text);
  Jet2 pj = p.psi.jet({0, 0}, 1);
  Jet2 xj = p.xi.jet({0, 0}, 1);
  p.psi0 = pj.value();
  if (p.psi0 == 0.0) throw DomainError("psi(0) must be nonzero");
  p.psi1 = pj.coeff(1, 0) / p.psi0;
  p.gamma = std::exp(xj.value());
  p.alpha = p.psi1 + xj.coeff(1, 0);
  p.alpha_zero = std::abs(p.alpha) < 1e-12;
  return p;
}

double JetSolution::j0(double s) const {
  auto z = sol.at(s);
  double x0 = z[0], y0 = z[1], px0 = z[2], py0 = z[3];
  double dy0 = gamma * gamma * py0 * std::pow(x0, 4);
  return x0 * dy0 - 3.0 * y0 * px0;
}

JetSolution solve_model_jets(double gamma) {
  if (gamma <= 0.0) throw DomainError("gamma must be positive");
  JetSolution js;
  js.gamma = gamma;
  js.K = elliptic_K_agm();
  double sg = std::sqrt(gamma);
  js.s_bar = 2.0 * js.K / sg;
  double g2c = gamma * gamma;
  double s_end = js.s_bar + 0.5;

  OdeRhs rhs = [g2c](double, const std::vector<double>& z, std::vector<double>& dz) {
    model_rhs(g2c, z, dz);
  };
  OdeOptions o;
  o.rtol = 1e-13;
  o.atol = 1e-13;
  js.sol = integrate_dopri5(rhs, 0.0, s_end, kInit, o);

  // closed forms for x0, y0 and the py0 invariant over the accepted grid
  for (std::size_t i = 0; i < js.sol.t.size(); ++i) {
    double s = js.sol.t[i];
    JacobiValues jv = jacobi_cn_sn_dn(js.K + sg * s);
    double x0c = -(std::sqrt(2.0) / sg) * jv.cn;
    double y0c = -(2.0 / (3.0 * sg)) * (sg * s + 2.0 * jv.sn * jv.cn * jv.dn);
    js.closed_form_max_err =
        std::max({js.closed_form_max_err, std::abs(js.sol.y[i][0] - x0c),
                  std::abs(js.sol.y[i][1] - y0c)});
    js.py0_drift = std::max(js.py0_drift, std::abs(js.sol.y[i][3] + 0.5));
  }

  auto zbar = js.sol.at(js.s_bar);
  js.x10_at = zbar[4];
  js.y10_at = zbar[5];
  js.g1_at = zbar[8];
  js.g2_at = zbar[9];
  js.two_g1_plus_g2 = 2.0 * js.g1_at + js.g2_at;

  // classical fixed-step RK4 as an independent check of the same constant
  {
    const int n = 40000;
    double h = js.s_bar / n;
    std::vector<double> z = kInit, k1, k2, k3, k4, tmp(11);
    for (int i = 0; i < n; ++i) {
      model_rhs(g2c, z, k1);
      for (int j = 0; j < 11; ++j) tmp[j] = z[j] + 0.5 * h * k1[j];
      model_rhs(g2c, tmp, k2);
      for (int j = 0; j < 11; ++j) tmp[j] = z[j] + 0.5 * h * k2[j];
      model_rhs(g2c, tmp, k3);
      for (int j = 0; j < 11; ++j) tmp[j] = z[j] + h * k3[j];
      model_rhs(g2c, tmp, k4);
      for (int j = 0; j < 11; ++j)
        z[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    js.two_g1_plus_g2_rk4 = 2.0 * z[8] + z[9];
  }

  // sign scan of J0 on (0, s_bar + 0.2]
  js.j0_min_abs = std::numeric_limits<double>::infinity();
  double prev = 0.0;
  bool have_prev = false;
  for (double s = 1e-3; s <= js.s_bar + 0.2; s += 1e-3) {
    double v = js.j0(s);
    js.j0_min_abs = std::min(js.j0_min_abs, std::abs(v));
    if (have_prev && v * prev < 0.0) js.j0_vanishes = true;
    prev = v;
    have_prev = true;
  }
  return js;
}

CutPrediction predict_cut_coefficients(const F3Params& params, const JetSolution& jets,
                                       double a) {
  if (a <= 0.0) throw DomainError("fan parameter a must be positive");
  CutPrediction out;
  double p1 = params.psi1;
  out.upper.a_bar = -a - a * a * p1;
  out.upper.t_int = a * (1.0 + 0.5 * a * p1);
  out.upper.x_int = -0.5 * p1 * a * a;
  out.upper.y_int = a * a;

  double sg = std::sqrt(jets.gamma);
  out.omega_candidate =
      0.5 * jets.two_g1_plus_g2 * std::pow(3.0 * sg / (4.0 * jets.K), 2.0 / 3.0);
  if (params.alpha_zero) return out;

  out.has_lower = true;
  double eta0 = std::sqrt(a);
  double al = params.alpha;
  out.lower.eta0 = eta0;
  out.lower.x_int = eta0 * eta0 * al * 0.5 * jets.two_g1_plus_g2;
  out.lower.y_int = -eta0 * eta0 * eta0 * 4.0 * jets.K / (3.0 * sg);
  out.lower.t0 = jets.s_bar * eta0;
  out.lower.c_plus = sg * (al * jets.g2_at - 2.0 * jets.x10_at) / (4.0 * jets.K);
  out.lower.c_minus = -sg * (al * jets.g2_at + 2.0 * jets.x10_at) / (4.0 * jets.K);
  out.lower.a_bar = -a + (sg * al / jets.K) * jets.g2_at * a * eta0;
  return out;
}

}  // namespace ars
