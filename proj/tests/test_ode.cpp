#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ars/ode.hpp"

using namespace ars;

namespace {

const OdeRhs harmonic = [](double, const std::vector<double>& y, std::vector<double>& dy) {
  dy[0] = y[1];
  dy[1] = -y[0];
};

}  // namespace

TEST_CASE("harmonic oscillator forward") {
  OdeSolution s = integrate_dopri5(harmonic, 0.0, 10.0, {1.0, 0.0});
  CHECK(s.t.back() == 10.0);
  CHECK(s.final()[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-10));
  CHECK(s.final()[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-10));
}

TEST_CASE("harmonic oscillator backward in time") {
  OdeSolution s = integrate_dopri5(harmonic, 0.0, -7.5, {1.0, 0.0});
  CHECK(s.t.back() == -7.5);
  CHECK(s.final()[0] == doctest::Approx(std::cos(7.5)).epsilon(1e-10));
  CHECK(s.final()[1] == doctest::Approx(std::sin(7.5)).epsilon(1e-10));
}

TEST_CASE("dense output is accurate between accepted steps") {
  OdeSolution s = integrate_dopri5(harmonic, 0.0, 10.0, {1.0, 0.0});
  REQUIRE(s.t.size() > 3);
  for (int k = 0; k <= 200; ++k) {
    double t = 10.0 * k / 200.0;
    std::vector<double> y = s.at(t);
    CHECK(y[0] == doctest::Approx(std::cos(t)).epsilon(1e-9));
    CHECK(y[1] == doctest::Approx(-std::sin(t)).epsilon(1e-9));
  }
}

TEST_CASE("exponential decay with tight tolerances") {
  OdeRhs decay = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = -3.0 * y[0];
  };
  OdeOptions opts;
  opts.rtol = 1e-13;
  opts.atol = 1e-13;
  OdeSolution s = integrate_dopri5(decay, 0.0, 4.0, {2.0}, opts);
  CHECK(s.final()[0] == doctest::Approx(2.0 * std::exp(-12.0)).epsilon(1e-10));
}

TEST_CASE("nonautonomous right-hand side") {
  // y' = 2 t y, y(0) = 1 -> y = exp(t^2)
  OdeRhs rhs = [](double t, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = 2.0 * t * y[0];
  };
  OdeSolution s = integrate_dopri5(rhs, 0.0, 2.0, {1.0});
  CHECK(s.final()[0] == doctest::Approx(std::exp(4.0)).epsilon(1e-10));
}

TEST_CASE("zero-span integration returns the initial state only") {
  OdeSolution s = integrate_dopri5(harmonic, 1.0, 1.0, {0.25, -0.5});
  CHECK(s.t.size() == 1);
  CHECK(s.final()[0] == 0.25);
  CHECK(s.final()[1] == -0.5);
}

TEST_CASE("per-component error weights are honored") {
  // loosening the second component should not break the first
  OdeOptions opts;
  opts.scale = {1.0, 1e6};
  OdeSolution s = integrate_dopri5(harmonic, 0.0, 10.0, {1.0, 0.0}, opts);
  CHECK(s.final()[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-7));
}

TEST_CASE("step budget is enforced") {
  OdeOptions opts;
  opts.max_steps = 10;
  CHECK_THROWS_AS(integrate_dopri5(harmonic, 0.0, 1000.0, {1.0, 0.0}, opts), Error);
}
