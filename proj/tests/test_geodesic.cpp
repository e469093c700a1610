#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "ars/geodesic.hpp"

using namespace ars;

namespace {
const Box kBox{-2.0, 2.0, -2.0, 2.0};
}

TEST_CASE("euclidean geodesics are straight lines at unit speed") {
  Ars e = make_frame_ars("1", "0", "0", "1", kBox);
  GeodesicState s0{0.1, -0.2, 0.6, 0.8};  // |p| = 1 -> H = 1/2
  CHECK(hamiltonian(e, s0) == doctest::Approx(0.5).epsilon(1e-15));
  Geodesic g = flow_geodesic(e, s0, 1.5);
  GeodesicState sf = g.final_state();
  CHECK(sf.x == doctest::Approx(0.1 + 1.5 * 0.6).epsilon(1e-12));
  CHECK(sf.y == doctest::Approx(-0.2 + 1.5 * 0.8).epsilon(1e-12));
  CHECK(sf.px == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(g.h_drift < 1e-13);
}

TEST_CASE("hamiltonian is conserved through the singular region") {
  Ars a = make_fchart_ars("x", kBox);
  // launch toward Z from the Riemannian side
  GeodesicState s0{0.5, 0.0, -1.0, 0.4};
  double H0 = hamiltonian(a, s0);
  Geodesic g = flow_geodesic(a, s0, 2.0);
  CHECK(g.h_drift < 1e-10);
  for (int k = 0; k <= 40; ++k) {
    GeodesicState s = g.state_at(2.0 * k / 40.0);
    CHECK(std::abs(hamiltonian(a, s) - H0) < 1e-9);
  }
}

TEST_CASE("flow is time reversible") {
  Ars a = make_fchart_ars("x*exp(0.3*x*y)", kBox);
  GeodesicState s0{0.4, 0.1, -0.8, 0.3};
  Geodesic fwd = flow_geodesic(a, s0, 1.2);
  GeodesicState sf = fwd.final_state();
  // reverse the momentum, flow the same duration, reverse again
  Geodesic back = flow_geodesic(a, {sf.x, sf.y, -sf.px, -sf.py}, 1.2);
  GeodesicState sb = back.final_state();
  CHECK(std::abs(sb.x - s0.x) < 1e-8);
  CHECK(std::abs(sb.y - s0.y) < 1e-8);
  CHECK(std::abs(sb.px + s0.px) < 1e-8);
  CHECK(std::abs(sb.py + s0.py) < 1e-8);
}

TEST_CASE("rhs matches hamilton equations by finite differences") {
  Ars a = make_fchart_ars("y - x^2*(1+x)", kBox);
  GeodesicState s{0.2, 0.3, 0.5, -0.7};
  std::array<double, 4> rhs = hamiltonian_rhs(a, s);
  double h = 1e-6;
  auto H = [&](double x, double y, double px, double py) {
    return hamiltonian(a, {x, y, px, py});
  };
  CHECK(rhs[0] == doctest::Approx((H(s.x, s.y, s.px + h, s.py) - H(s.x, s.y, s.px - h, s.py)) / (2 * h)).epsilon(1e-7));
  CHECK(rhs[1] == doctest::Approx((H(s.x, s.y, s.px, s.py + h) - H(s.x, s.y, s.px, s.py - h)) / (2 * h)).epsilon(1e-7));
  CHECK(rhs[2] == doctest::Approx(-(H(s.x + h, s.y, s.px, s.py) - H(s.x - h, s.y, s.px, s.py)) / (2 * h)).epsilon(1e-7));
  CHECK(rhs[3] == doctest::Approx(-(H(s.x, s.y + h, s.px, s.py) - H(s.x, s.y - h, s.px, s.py)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("transversal covector annihilates the tangent at H = 1/2") {
  Ars a = make_fchart_ars("y - x^2*(1+x)", kBox);
  Point2 q{0.3, 0.09 * 1.3};
  Vec2 t{1.0, 2 * 0.3 + 3 * 0.09};  // d/dx (x^2 + x^3) at 0.3
  GeodesicState up = transversal_covector(a, q, t, +1);
  GeodesicState dn = transversal_covector(a, q, t, -1);
  CHECK(up.px * t.x + up.py * t.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hamiltonian(a, up) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hamiltonian(a, dn) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(up.px == doctest::Approx(-dn.px).epsilon(1e-12));
  CHECK(up.py == doctest::Approx(-dn.py).epsilon(1e-12));
}

TEST_CASE("variational flow matches finite differences of the flow") {
  Ars a = make_fchart_ars("x+1", kBox);
  GeodesicState s0{0.1, 0.0, 0.6, 0.8 / 1.1};
  std::array<double, 4> da0{0.0, 1.0, 0.0, 0.0};
  double T = 0.8;
  VariationalFrame v = variational_flow(a, s0, da0, T);
  std::array<double, 4> dv = v.variation_at(T);

  double eps = 1e-6;
  GeodesicState sp{s0.x, s0.y + eps, s0.px, s0.py};
  GeodesicState sm{s0.x, s0.y - eps, s0.px, s0.py};
  GeodesicState fp = flow_geodesic(a, sp, T).final_state();
  GeodesicState fm = flow_geodesic(a, sm, T).final_state();
  CHECK(dv[0] == doctest::Approx((fp.x - fm.x) / (2 * eps)).epsilon(1e-4));
  CHECK(dv[1] == doctest::Approx((fp.y - fm.y) / (2 * eps)).epsilon(1e-4));
  CHECK(dv[2] == doctest::Approx((fp.px - fm.px) / (2 * eps)).epsilon(1e-4));
  CHECK(dv[3] == doctest::Approx((fp.py - fm.py) / (2 * eps)).epsilon(1e-4));
}

TEST_CASE("straight euclidean fans have no conjugate points") {
  Ars e = make_frame_ars("1", "0", "0", "1", kBox);
  GeodesicState s0{0.0, 0.0, 1.0, 0.0};
  VariationalFrame v = variational_flow(e, s0, {0.0, 0.0, 0.0, 1.0}, 2.0);
  CHECK(!v.has_conjugate);
  // jacobian determinant grows linearly for a point fan in the plane
  CHECK(v.jac_det(e, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(v.jac_det(e, 2.0) == doctest::Approx(2.0).epsilon(1e-8));
}
