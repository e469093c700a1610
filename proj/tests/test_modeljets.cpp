#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ars/elliptic.hpp"
#include "ars/modeljets.hpp"

using namespace ars;

TEST_CASE("closed forms of the base jet system") {
  for (double gamma : {0.5, 1.0, 2.0}) {
    JetSolution j = solve_model_jets(gamma);
    CHECK(j.K == doctest::Approx(elliptic_K_agm()).epsilon(1e-15));
    CHECK(j.s_bar == doctest::Approx(2.0 * j.K / std::sqrt(gamma)).epsilon(1e-14));
    CHECK(j.closed_form_max_err <= 1e-8);
    CHECK(j.py0_drift <= 1e-10);
  }
}

TEST_CASE("base trajectory returns to the singular set at the half period") {
  JetSolution j = solve_model_jets(1.0);
  std::vector<double> y = j.sol.at(j.s_bar);
  // x0 vanishes again at s_bar, with x0' reversed
  CHECK(std::abs(y[0]) < 1e-10);
  // y0 advances by the full drop -4K/(3 sqrt(gamma)) ... sign fixed by p_y < 0
  CHECK(y[1] == doctest::Approx(-4.0 * j.K / 3.0).epsilon(1e-9));
}

TEST_CASE("constants extracted at the half period") {
  JetSolution j = solve_model_jets(1.0);
  // gamma = 1: 2 g1 + g2 collapses to -pi
  CHECK(j.two_g1_plus_g2 == doctest::Approx(-M_PI).epsilon(1e-10));
  CHECK(j.two_g1_plus_g2 == doctest::Approx(2.0 * j.g1_at + j.g2_at).epsilon(1e-14));
}

TEST_CASE("two integrators of different order agree") {
  for (double gamma : {0.5, 1.0, 2.0}) {
    JetSolution j = solve_model_jets(gamma);
    CHECK(std::abs(j.two_g1_plus_g2 - j.two_g1_plus_g2_rk4) <= 1e-8);
    CHECK(j.two_g1_plus_g2 != 0.0);
  }
}

TEST_CASE("leading jacobian factor never vanishes before the half period") {
  for (double gamma : {0.5, 1.0, 2.0}) {
    JetSolution j = solve_model_jets(gamma);
    CHECK(!j.j0_vanishes);
    CHECK(j.j0_min_abs > 0.0);
    // spot-check against the definition
    double s = 0.6 * j.s_bar;
    std::vector<double> y = j.sol.at(s);
    double h = 1e-6;
    std::vector<double> yp = j.sol.at(s + h), ym = j.sol.at(s - h);
    double x0p = (yp[0] - ym[0]) / (2 * h), y0p = (yp[1] - ym[1]) / (2 * h);
    CHECK(j.j0(s) == doctest::Approx(y[0] * y0p - 3.0 * y[1] * x0p).epsilon(1e-6));
  }
}

TEST_CASE("f3 parameters from the chart functions") {
  F3Params p = F3Params::make("1 + x", "0.3*x");
  CHECK(p.psi0 == doctest::Approx(1.0));
  CHECK(p.psi1 == doctest::Approx(1.0));
  CHECK(p.gamma == doctest::Approx(1.0));
  CHECK(p.alpha == doctest::Approx(1.0 + 0.3));
  CHECK(!p.alpha_zero);

  F3Params q = F3Params::make("1", "0");
  CHECK(q.alpha_zero);
  CHECK(q.gamma == doctest::Approx(1.0));

  // psi(0) != 1 is normalized away without touching gamma
  F3Params r = F3Params::make("2 + x", "0");
  CHECK(r.psi0 == doctest::Approx(2.0));
  CHECK(r.gamma == doctest::Approx(1.0));
  CHECK(r.psi1 == doctest::Approx(0.5));
}

TEST_CASE("cut predictions follow the leading-order formulas") {
  F3Params p = F3Params::make("1 + x", "0");
  JetSolution j = solve_model_jets(p.gamma);
  double a = 0.01;
  CutPrediction c = predict_cut_coefficients(p, j, a);

  CHECK(c.upper.y_int == doctest::Approx(a * a).epsilon(1e-12));
  CHECK(c.upper.x_int == doctest::Approx(-0.5 * p.psi1 * a * a).epsilon(1e-12));
  CHECK(c.upper.t_int == doctest::Approx(a * (1 + 0.5 * a * p.psi1)).epsilon(1e-12));
  CHECK(c.upper.a_bar == doctest::Approx(-a - a * a * p.psi1).epsilon(1e-12));

  REQUIRE(c.has_lower);
  double eta0 = std::sqrt(a);
  CHECK(c.lower.eta0 == doctest::Approx(eta0).epsilon(1e-14));
  CHECK(c.lower.t0 == doctest::Approx(j.s_bar * eta0).epsilon(1e-12));
  CHECK(c.lower.y_int ==
        doctest::Approx(-eta0 * eta0 * eta0 * 4.0 * j.K / (3.0 * std::sqrt(p.gamma))).epsilon(1e-12));
  CHECK(c.lower.x_int ==
        doctest::Approx(eta0 * eta0 * p.alpha * j.two_g1_plus_g2 / 2.0).epsilon(1e-12));

  // alpha = 0 suppresses the lower-side prediction
  F3Params flat = F3Params::make("1", "0");
  CutPrediction cf = predict_cut_coefficients(flat, j, a);
  CHECK(!cf.has_lower);
}
