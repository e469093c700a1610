#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ars/classify.hpp"

using namespace ars;

namespace {
const Box kBox{-0.6, 0.6, -0.6, 0.6};
}

TEST_CASE("grushin chart points") {
  Ars a = make_fchart_ars("x", kBox);
  CHECK(point_class(a, {0.0, 0.2}).kind == PointKind::Grushin);
  CHECK(point_class(a, {0.0, -0.5}).kind == PointKind::Grushin);
  PointClass r = point_class(a, {0.3, 0.0});
  // K = -2/x^2 has no critical points: everything off Z is R1
  CHECK(r.kind == PointKind::RiemannianR1);
  CHECK(r.witnesses.grad_k_norm > 0.0);
}

TEST_CASE("riemannian chart is R1 when K has no critical point") {
  Ars a = make_fchart_ars("x+1", kBox);
  CHECK(point_class(a, {0.0, 0.0}).kind == PointKind::RiemannianR1);
  CHECK(point_class(a, {0.4, -0.3}).kind == PointKind::RiemannianR1);
}

TEST_CASE("tangency of the parabola model") {
  Ars a = make_fchart_ars("y - x^2", kBox);
  PointClass c = point_class(a, {0.0, 0.0});
  CHECK(c.kind == PointKind::TangencyPlus);
  CHECK(c.witnesses.d0 == doctest::Approx(0.0));
  CHECK(std::abs(c.witnesses.d1) < 1e-12);
  CHECK(std::abs(c.witnesses.d2) > 1e-3);
  // off the tangency, Z-points are Grushin
  CHECK(point_class(a, {0.3, 0.09}).kind == PointKind::Grushin);
}

TEST_CASE("tangency sign flips with the defining function") {
  // reversing the parabola side reverses the rotation of the distribution
  Ars plus = make_fchart_ars("y - x^2*(1+x)", kBox);
  Ars minus = make_fchart_ars("-y + x^2*(1+x)", kBox);
  CHECK(point_class(plus, {0.0, 0.0}).kind == PointKind::TangencyPlus);
  CHECK(point_class(minus, {0.0, 0.0}).kind == PointKind::TangencyMinus);
  CHECK(tangency_type(plus, {0.0, 0.0}) == PointKind::TangencyPlus);
  CHECK(tangency_type(minus, {0.0, 0.0}) == PointKind::TangencyMinus);
}

TEST_CASE("step-3 degeneracy is reported, not misclassified") {
  Ars a = make_fchart_ars("x^3", kBox);
  CHECK(point_class(a, {0.0, 0.1}).kind == PointKind::Degenerate);
}

TEST_CASE("singular set trace stays on the zero determinant locus") {
  Ars a = make_fchart_ars("y - x^2*(1+x)", kBox);
  Curve z = trace_singular_set(a, {0.3, 0.12});
  CHECK(z.samples.size() > 20);
  for (const CurveSample& s : z.samples) CHECK(std::abs(a.det(s.p)) < 1e-10);

  std::vector<Point2> tang = find_tangencies(a, z);
  REQUIRE(tang.size() == 1);
  CHECK(norm(tang[0]) < 1e-8);
}

TEST_CASE("transversal singular curve has no tangencies") {
  Ars a = make_fchart_ars("x - 0.2", kBox);
  Curve z = trace_singular_set(a, {0.2, 0.0});
  CHECK(find_tangencies(a, z).empty());
  for (const CurveSample& s : z.samples) CHECK(std::abs(s.p.x - 0.2) < 1e-10);
}

TEST_CASE("det_field agrees with Ars::det") {
  Ars a = make_fchart_ars("x*exp(0.3*x*y)", kBox);
  ScalarJetField d = det_field(a);
  Point2 q{0.25, -0.4};
  CHECK(d(q, 0).value() == doctest::Approx(a.det(q)).epsilon(1e-14));
  Jet2 j = d(q, 2);
  Jet2 ref = a.det_jet(q, 2);
  CHECK(j.coeff(1, 0) == doctest::Approx(ref.coeff(1, 0)).epsilon(1e-13));
  CHECK(j.coeff(0, 1) == doctest::Approx(ref.coeff(0, 1)).epsilon(1e-13));
}
