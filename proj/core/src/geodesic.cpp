#include "ars/geodesic.hpp"

#include <cmath>

namespace ars {

namespace {

struct RhsData {
  std::array<double, 4> rhs;
  // full 4x4 Jacobian d(rhs)/d(x, y, px, py)
  double J[4][4];
};

// Velocity and covector rates from the spatial jets of the frame; the
// Jacobian block structure is symplectic: d(pdot)/dp = -transpose(d(v)/dq).
RhsData rhs_with_jacobian(const Ars& ars, const GeodesicState& s, bool want_jac) {
  FrameJets fj = ars.jets({s.x, s.y}, want_jac ? 2 : 1);
  Jet2 u1 = s.px * fj.a1 + s.py * fj.a2;  // p.F1 as a spatial jet, p frozen
  Jet2 u2 = s.px * fj.b1 + s.py * fj.b2;
  Jet2 X = u1 * fj.a1 + u2 * fj.b1;  // dH/dpx
  Jet2 Y = u1 * fj.a2 + u2 * fj.b2;  // dH/dpy
  Jet2 H = 0.5 * (u1 * u1 + u2 * u2);

  RhsData out;
  out.rhs = {X.value(), Y.value(), -H.partial(1, 0), -H.partial(0, 1)};
  if (!want_jac) return out;

  double a1 = fj.a1.value(), a2 = fj.a2.value();
  double b1 = fj.b1.value(), b2 = fj.b2.value();
  double Xx = X.partial(1, 0), Xy = X.partial(0, 1);
  double Yx = Y.partial(1, 0), Yy = Y.partial(0, 1);
  double M11 = a1 * a1 + b1 * b1;
  double M12 = a1 * a2 + b1 * b2;
  double M22 = a2 * a2 + b2 * b2;

  out.J[0][0] = Xx;
  out.J[0][1] = Xy;
  out.J[0][2] = M11;
  out.J[0][3] = M12;
  out.J[1][0] = Yx;
  out.J[1][1] = Yy;
  out.J[1][2] = M12;
  out.J[1][3] = M22;
  out.J[2][0] = -H.partial(2, 0);
  out.J[2][1] = -H.partial(1, 1);
  out.J[2][2] = -Xx;
  out.J[2][3] = -Yx;
  out.J[3][0] = -H.partial(1, 1);
  out.J[3][1] = -H.partial(0, 2);
  out.J[3][2] = -Xy;
  out.J[3][3] = -Yy;
  return out;
}

GeodesicState unpack(const std::vector<double>& z) { return {z[0], z[1], z[2], z[3]}; }

double max_h_drift(const Ars& ars, const OdeSolution& sol) {
  double h0 = hamiltonian(ars, unpack(sol.y.front()));
  double drift = 0.0;
  for (const auto& z : sol.y)
    drift = std::max(drift, std::abs(hamiltonian(ars, unpack(z)) - h0));
  return drift;
}

OdeOptions flow_ode_options(const FlowOptions& opts, const GeodesicState& s0,
                            std::size_t nstates) {
  OdeOptions o;
  o.rtol = opts.rtol;
  o.atol = opts.atol;
  double w = opts.py_scale > 0.0 ? opts.py_scale : std::max(1.0, std::abs(s0.py));
  o.scale.assign(nstates, 1.0);
  o.scale[3] = w;
  if (nstates > 4) o.scale[7] = w;
  return o;
}

}  // namespace

double hamiltonian(const Ars& ars, const GeodesicState& s) {
  FrameJets fj = ars.jets({s.x, s.y}, 0);
  double u1 = s.px * fj.a1.value() + s.py * fj.a2.value();
  double u2 = s.px * fj.b1.value() + s.py * fj.b2.value();
  return 0.5 * (u1 * u1 + u2 * u2);
}

std::array<double, 4> hamiltonian_rhs(const Ars& ars, const GeodesicState& s) {
  return rhs_with_jacobian(ars, s, false).rhs;
}

GeodesicState Geodesic::state_at(double t) const { return unpack(sol.at(t)); }
GeodesicState Geodesic::final_state() const { return unpack(sol.final()); }

Geodesic flow_geodesic(const Ars& ars, GeodesicState s0, double T, FlowOptions opts) {
  OdeRhs rhs = [&ars](double, const std::vector<double>& z, std::vector<double>& dz) {
    auto r = rhs_with_jacobian(ars, unpack(z), false).rhs;
    dz.assign(r.begin(), r.end());
  };
  OdeOptions o = flow_ode_options(opts, s0, 4);
  double budget = opts.h_tol * std::max(1.0, std::abs(T));
  for (int attempt = 0; attempt < 2; ++attempt) {
    Geodesic g;
    g.sol = integrate_dopri5(rhs, 0.0, T, {s0.x, s0.y, s0.px, s0.py}, o);
    g.t_final = T;
    g.h_drift = max_h_drift(ars, g.sol);
    if (g.h_drift <= budget) return g;
    o.rtol *= 1e-2;
    o.atol *= 1e-2;
  }
  throw Error("Hamiltonian drift above tolerance after retry");
}

GeodesicState transversal_covector(const Ars& ars, Point2 point, Vec2 tangent, int side) {
  if (norm(tangent) == 0.0) throw Error("zero curve tangent");
  Vec2 n = normalized(perp(tangent));
  FrameJets fj = ars.jets(point, 0);
  double n1 = n.x * fj.a1.value() + n.y * fj.a2.value();
  double n2 = n.x * fj.b1.value() + n.y * fj.b2.value();
  double q = n1 * n1 + n2 * n2;
  if (q <= 0.0)
    throw Error("no transversal covector: the curve is tangent to the distribution");
  double mu = 1.0 / std::sqrt(q);
  // condition (d): p.V > 0 with (V, tangent) positively oriented
  Vec2 v = (ars.orientation_M > 0 ? -1.0 : 1.0) * perp(tangent);
  if (mu * dot(n, v) < 0.0) mu = -mu;
  if (side < 0) mu = -mu;
  return {point.x, point.y, mu * n.x, mu * n.y};
}

GeodesicState chart_map_E_state(const Ars& ars, const Curve& curve, double xbar, double ybar) {
  Point2 c = curve.at(ybar);
  Vec2 t = curve.tangent_at(ybar);
  GeodesicState s0 = transversal_covector(ars, c, t, +1);
  if (xbar == 0.0) return s0;
  return flow_geodesic(ars, s0, xbar).final_state();
}

Point2 chart_map_E(const Ars& ars, const Curve& curve, double xbar, double ybar) {
  GeodesicState s = chart_map_E_state(ars, curve, xbar, ybar);
  return {s.x, s.y};
}

std::array<double, 4> VariationalFrame::variation_at(double t) const {
  auto z = sol.at(t);
  return {z[4], z[5], z[6], z[7]};
}

GeodesicState VariationalFrame::state_at(double t) const {
  auto z = sol.at(t);
  return {z[0], z[1], z[2], z[3]};
}

double VariationalFrame::jac_det(const Ars& ars, double t) const {
  auto z = sol.at(t);
  auto r = hamiltonian_rhs(ars, {z[0], z[1], z[2], z[3]});
  return r[0] * z[5] - r[1] * z[4];
}

VariationalFrame variational_flow(const Ars& ars, GeodesicState s0,
                                  const std::array<double, 4>& da0, double T,
                                  FlowOptions opts) {
  OdeRhs rhs = [&ars](double, const std::vector<double>& z, std::vector<double>& dz) {
    RhsData d = rhs_with_jacobian(ars, {z[0], z[1], z[2], z[3]}, true);
    dz.resize(8);
    for (int i = 0; i < 4; ++i) dz[i] = d.rhs[i];
    for (int i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) acc += d.J[i][j] * z[4 + j];
      dz[4 + i] = acc;
    }
  };
  OdeOptions o = flow_ode_options(opts, s0, 8);
  std::vector<double> z0{s0.x, s0.y, s0.px, s0.py, da0[0], da0[1], da0[2], da0[3]};

  VariationalFrame vf;
  double budget = opts.h_tol * std::max(1.0, std::abs(T));
  for (int attempt = 0; attempt < 2; ++attempt) {
    vf.sol = integrate_dopri5(rhs, 0.0, T, z0, o);
    double h0 = hamiltonian(ars, s0);
    vf.h_drift = 0.0;
    for (const auto& z : vf.sol.y)
      vf.h_drift = std::max(vf.h_drift,
                            std::abs(hamiltonian(ars, {z[0], z[1], z[2], z[3]}) - h0));
    if (vf.h_drift <= budget) break;
    if (attempt == 1) throw Error("Hamiltonian drift above tolerance after retry");
    o.rtol *= 1e-2;
    o.atol *= 1e-2;
  }
  vf.t_final = T;

  // first sign change of the Jacobian determinant, skipping the start where
  // the determinant may vanish structurally
  double prev_t = 0.0;
  double prev_d = 0.0;
  bool have_prev = false;
  double t_eps = 1e-6 * std::max(1.0, std::abs(T));
  for (std::size_t i = 0; i < vf.sol.t.size(); ++i) {
    double t = vf.sol.t[i];
    if (std::abs(t) <= t_eps) continue;
    double dcur = vf.jac_det(ars, t);
    if (have_prev && prev_d != 0.0 && dcur * prev_d < 0.0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (vf.jac_det(ars, mid) * prev_d > 0.0) lo = mid;
        else hi = mid;
      }
      vf.has_conjugate = true;
      vf.first_conjugate_time = 0.5 * (lo + hi);
      break;
    }
    prev_t = t;
    prev_d = dcur;
    have_prev = true;
  }
  return vf;
}

}  // namespace ars
