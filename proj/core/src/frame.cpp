#include "ars/frame.hpp"

#include <cmath>

namespace ars {

ExprFrame::ExprFrame(FieldExpr a1, FieldExpr a2, FieldExpr b1, FieldExpr b2)
    : a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)), b2_(std::move(b2)) {}

FrameJets ExprFrame::frame_jets(Point2 center, int order) const {
  return {a1_.jet(center, order), a2_.jet(center, order),
          b1_.jet(center, order), b2_.jet(center, order)};
}

FChartFrame::FChartFrame(FieldExpr f) : f_(std::move(f)) {}

FrameJets FChartFrame::frame_jets(Point2 center, int order) const {
  return {Jet2::constant(center, order, 1.0), Jet2::constant(center, order, 0.0),
          Jet2::constant(center, order, 0.0), f_.jet(center, order)};
}

PushforwardFrame::PushforwardFrame(std::shared_ptr<const FrameField> base,
                                   FieldExpr phi1, FieldExpr phi2)
    : base_(std::move(base)), phi1_(std::move(phi1)), phi2_(std::move(phi2)) {}

Point2 PushforwardFrame::forward(Point2 p) const {
  return {phi1_.eval(p), phi2_.eval(p)};
}

Point2 PushforwardFrame::inverse(Point2 p) const {
  Point2 q = p;
  for (int it = 0; it < 60; ++it) {
    Jet2 j1 = phi1_.jet(q, 1), j2 = phi2_.jet(q, 1);
    double r1 = j1.value() - p.x, r2 = j2.value() - p.y;
    double m11 = j1.coeff(1, 0), m12 = j1.coeff(0, 1);
    double m21 = j2.coeff(1, 0), m22 = j2.coeff(0, 1);
    double det = m11 * m22 - m12 * m21;
    if (det == 0.0) throw DomainError("singular differential while inverting diffeomorphism");
    double dx = (m22 * r1 - m12 * r2) / det;
    double dy = (-m21 * r1 + m11 * r2) / det;
    q.x -= dx;
    q.y -= dy;
    if (std::abs(dx) + std::abs(dy) < 1e-15 * (1.0 + std::abs(q.x) + std::abs(q.y))) break;
  }
  return q;
}

FrameJets PushforwardFrame::frame_jets(Point2 center, int order) const {
  const Point2 q = inverse(center);
  const int n = order;

  // Jet of the inverse map at `center`, as offset jets (u, v) with zero
  // constant term: psi(center + d) = q + (u, v)(d).
  Jet2 f1 = phi1_.jet(q, n), f2 = phi2_.jet(q, n);
  double m11 = f1.order() >= 1 ? f1.coeff(1, 0) : 0.0;
  double m12 = f1.order() >= 1 ? f1.coeff(0, 1) : 0.0;
  double m21 = f2.order() >= 1 ? f2.coeff(1, 0) : 0.0;
  double m22 = f2.order() >= 1 ? f2.coeff(0, 1) : 0.0;
  double det = m11 * m22 - m12 * m21;
  if (n >= 1 && det == 0.0)
    throw DomainError("singular differential while inverting diffeomorphism");

  Jet2 dX = Jet2::variable_x(center, n) - center.x;
  Jet2 dY = Jet2::variable_y(center, n) - center.y;
  Jet2 u = Jet2::constant(center, n, 0.0);
  Jet2 v = Jet2::constant(center, n, 0.0);
  if (n >= 1) {
    u = (m22 * dX - m12 * dY) * (1.0 / det);
    v = (-m21 * dX + m11 * dY) * (1.0 / det);
    // Newton on the truncated series; each sweep doubles the correct order.
    int sweeps = 1;
    while ((1 << sweeps) < n + 1) ++sweeps;
    for (int it = 0; it < sweeps; ++it) {
      Jet2 r1 = f1.compose_map(u, v) - f1.value() - dX;
      Jet2 r2 = f2.compose_map(u, v) - f2.value() - dY;
      u -= (m22 * r1 - m12 * r2) * (1.0 / det);
      v -= (-m21 * r1 + m11 * r2) * (1.0 / det);
    }
  }

  // Pushed components (Dphi * F_i) expanded at q, then composed with the
  // inverse-map offsets to land at `center`.
  FrameJets base = base_->frame_jets(q, n);
  Jet2 g1 = phi1_.jet(q, n + 1), g2 = phi2_.jet(q, n + 1);
  Jet2 d1x = g1.derivative_x(), d1y = g1.derivative_y();
  Jet2 d2x = g2.derivative_x(), d2y = g2.derivative_y();

  auto push = [&](const Jet2& cx, const Jet2& cy, const Jet2& dx, const Jet2& dy) {
    Jet2 comp = dx * cx + dy * cy;
    return comp.compose_map(u, v);
  };
  return {push(base.a1, base.a2, d1x, d1y), push(base.a1, base.a2, d2x, d2y),
          push(base.b1, base.b2, d1x, d1y), push(base.b1, base.b2, d2x, d2y)};
}

Jet2 Ars::det_jet(Point2 center, int order) const {
  FrameJets fj = jets(center, order);
  return fj.a1 * fj.b2 - fj.a2 * fj.b1;
}

const FieldExpr& Ars::fchart() const {
  auto* fc = dynamic_cast<const FChartFrame*>(frame.get());
  if (!fc) throw Error("structure is not in f-chart form");
  return fc->f();
}

Ars make_fchart_ars(const std::string& f_text, Box domain, int orientation_M,
                    int orientation_E) {
  Ars a;
  a.frame = std::make_shared<FChartFrame>(parse_field(f_text));
  a.chart_form = true;
  a.orientation_M = orientation_M;
  a.orientation_E = orientation_E;
  a.domain = domain;
  return a;
}

Ars make_frame_ars(const std::string& a1, const std::string& a2, const std::string& b1,
                   const std::string& b2, Box domain, int orientation_M, int orientation_E) {
  Ars a;
  a.frame = std::make_shared<ExprFrame>(parse_field(a1), parse_field(a2),
                                        parse_field(b1), parse_field(b2));
  a.chart_form = false;
  a.orientation_M = orientation_M;
  a.orientation_E = orientation_E;
  a.domain = domain;
  return a;
}

Ars pushforward_ars(const Ars& base, const std::string& phi1, const std::string& phi2) {
  Ars a = base;
  a.frame = std::make_shared<PushforwardFrame>(base.frame, parse_field(phi1), parse_field(phi2));
  a.chart_form = false;
  return a;
}

}  // namespace ars
