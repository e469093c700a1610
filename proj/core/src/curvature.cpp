#include "ars/curvature.hpp"

#include <cmath>
#include <functional>

namespace ars {

namespace {

Jet2 tr(const Jet2& j, int n) { return j.order() == n ? j : j.truncated(n); }

// Directional derivative along a frame vector: (V . grad) g, one order down.
Jet2 along(const Jet2& v1, const Jet2& v2, const Jet2& g) {
  int n = g.order() - 1;
  return tr(v1, n) * g.derivative_x() + tr(v2, n) * g.derivative_y();
}

struct StructureFunctions {
  Jet2 c1, c2;  // [F1,F2] = c1 F1 + c2 F2
};

StructureFunctions structure_functions(const Ars& ars, Point2 q, int order) {
  FrameJets fj = ars.jets(q, order + 1);
  Jet2 br1 = along(fj.a1, fj.a2, fj.b1) - along(fj.b1, fj.b2, fj.a1);
  Jet2 br2 = along(fj.a1, fj.a2, fj.b2) - along(fj.b1, fj.b2, fj.a2);
  Jet2 a1 = tr(fj.a1, order), a2 = tr(fj.a2, order);
  Jet2 b1 = tr(fj.b1, order), b2 = tr(fj.b2, order);
  Jet2 det = a1 * b2 - a2 * b1;
  if (det.value() == 0.0) throw DomainError("structure functions on the singular set");
  Jet2 inv = reciprocal(det);
  return {(br1 * b2 - b1 * br2) * inv, (a1 * br2 - a2 * br1) * inv};
}

}  // namespace

Jet2 curvature_jet_frame_path(const Ars& ars, Point2 q, int order) {
  StructureFunctions sf = structure_functions(ars, q, order + 1);
  FrameJets fj = ars.jets(q, order + 1);
  Jet2 e1c2 = along(fj.a1, fj.a2, sf.c2);
  Jet2 e2c1 = along(fj.b1, fj.b2, sf.c1);
  Jet2 c1 = tr(sf.c1, order), c2 = tr(sf.c2, order);
  return e1c2 - e2c1 - c1 * c1 - c2 * c2;
}

Jet2 curvature_jet(const Ars& ars, Point2 q, int order) {
  if (!ars.chart_form) return curvature_jet_frame_path(ars, q, order);
  Jet2 f = ars.fchart().jet(q, order + 2);
  if (f.value() == 0.0) throw DomainError("curvature evaluated on the singular set");
  Jet2 fx = tr(f.derivative_x(), order);
  Jet2 fxx = f.derivative_x().derivative_x();
  Jet2 fn = tr(f, order);
  return (-2.0 * (fx * fx) + fn * fxx) / (fn * fn);
}

double gauss_curvature(const Ars& ars, Point2 q) {
  FrameJets fj = ars.jets(q, 0);
  double d = fj.a1.value() * fj.b2.value() - fj.a2.value() * fj.b1.value();
  double scale = std::max({1e-300, fj.a1.value() * fj.a1.value() + fj.a2.value() * fj.a2.value(),
                           fj.b1.value() * fj.b1.value() + fj.b2.value() * fj.b2.value()});
  if (std::abs(d) / scale <= ars.tol.zero_det)
    throw DomainError("curvature requested on or too near the singular set");
  return curvature_jet(ars, q, 0).value();
}

GradK grad_K(const Ars& ars, Point2 q) {
  Jet2 K = curvature_jet(ars, q, 1);
  FrameJets fj = ars.jets(q, 0);
  double a1 = fj.a1.value(), a2 = fj.a2.value();
  double b1 = fj.b1.value(), b2 = fj.b2.value();
  double Kx = K.coeff(1, 0), Ky = K.coeff(0, 1);
  double e1K = a1 * Kx + a2 * Ky;
  double e2K = b1 * Kx + b2 * Ky;
  GradK g;
  g.e1K = e1K;
  g.e2K = e2K;
  g.grad = {e1K * a1 + e2K * b1, e1K * a2 + e2K * b2};
  g.norm2 = e1K * e1K + e2K * e2K;
  return g;
}

Jet2 grad_norm2_jet(const Ars& ars, Point2 q, int order) {
  Jet2 K = curvature_jet(ars, q, order + 1);
  FrameJets fj = ars.jets(q, order);
  Jet2 e1K = along(fj.a1, fj.a2, K);
  Jet2 e2K = along(fj.b1, fj.b2, K);
  return e1K * e1K + e2K * e2K;
}

Jet2 spade_raw_jet(const Ars& ars, Point2 q, int order) {
  Jet2 K = curvature_jet(ars, q, order + 2);
  FrameJets fj = ars.jets(q, order + 1);
  Jet2 e1K = along(fj.a1, fj.a2, K);
  Jet2 e2K = along(fj.b1, fj.b2, K);
  Jet2 A = e1K * e1K + e2K * e2K;
  FrameJets fn = ars.jets(q, order);
  Jet2 e1A = along(fn.a1, fn.a2, A);
  Jet2 e2A = along(fn.b1, fn.b2, A);
  return e2A * tr(e1K, order) - e1A * tr(e2K, order);
}

Jet2 spade_desing_jet(const Ars& ars, Point2 q, int order) {
  Jet2 S = spade_raw_jet(ars, q, order);
  Jet2 D = ars.det_jet(q, order);
  return S * D.pow_int(8);
}

SpadeValue spade_indicator(const Ars& ars, Point2 q) {
  Jet2 S = spade_raw_jet(ars, q, 0);
  double d = ars.det(q);
  return {S.value(), S.value() * std::pow(d, 8)};
}

CriticalPointClass classify_critical_point(const Ars& ars, Point2 q,
                                           const std::function<double(Point2)>& k_field) {
  FrameJets fj = ars.jets(q, 0);
  Vec2 F1{fj.a1.value(), fj.a2.value()};
  Vec2 F2{fj.b1.value(), fj.b2.value()};

  const double h = 1e-3;
  auto K = [&](Vec2 d) { return k_field(q + d); };
  // Second directional differences with one Richardson step.
  auto second = [&](Vec2 u, double step) {
    return (K(step * u) - 2.0 * K({0, 0}) + K(-step * u)) / (step * step);
  };
  auto mixed = [&](Vec2 u, Vec2 v, double step) {
    return (K(step * (u + v)) - K(step * (u - v)) - K(step * (v - u)) + K(-step * (u + v))) /
           (4.0 * step * step);
  };
  auto rich = [&](const std::function<double(double)>& f) {
    return (4.0 * f(h / 2) - f(h)) / 3.0;
  };
  double H11 = rich([&](double s) { return second(F1, s); });
  double H22 = rich([&](double s) { return second(F2, s); });
  double H12 = rich([&](double s) { return mixed(F1, F2, s); });

  // Symmetric 2x2 eigen-decomposition.
  double tr_h = H11 + H22;
  double diff = H11 - H22;
  double disc = std::sqrt(diff * diff + 4.0 * H12 * H12);
  double lo = 0.5 * (tr_h - disc), hi = 0.5 * (tr_h + disc);

  auto eigvec = [&](double lambda) -> Vec2 {
    Vec2 v1{H12, lambda - H11}, v2{lambda - H22, H12};
    Vec2 v = norm(v1) > norm(v2) ? v1 : v2;
    if (norm(v) == 0.0) v = {1, 0};
    return normalized(v);
  };
  Vec2 ulo = eigvec(lo), uhi = eigvec(hi);

  CriticalPointClass out;
  out.eigenvalues[0] = lo;
  out.eigenvalues[1] = hi;
  // frame coordinates -> chart vectors
  auto to_chart = [&](Vec2 u) { return Vec2{u.x * F1.x + u.y * F2.x, u.x * F1.y + u.y * F2.y}; };
  out.eigendirections[0] = to_chart(ulo);
  out.eigendirections[1] = to_chart(uhi);

  if (disc <= ars.tol.eigen_gap || (std::abs(lo) <= ars.tol.eigen_gap && std::abs(hi) <= ars.tol.eigen_gap))
    out.ha_violated = true;

  if (hi < 0.0) out.kind = CriticalKind::Max;
  else if (lo > 0.0) out.kind = CriticalKind::Min;
  else out.kind = CriticalKind::Saddle;

  // Crest along the larger eigenvalue for maxima and saddles, valley along
  // the smaller for minima; orientation fixed by a positive third
  // derivative of K along the curve.
  Vec2 ucan = out.kind == CriticalKind::Min ? ulo : uhi;
  out.is_crest = out.kind != CriticalKind::Min;
  Vec2 dir = to_chart(ucan);
  auto third = [&](double step) {
    return (K(2 * step * dir) - 2 * K(step * dir) + 2 * K(-step * dir) - K(-2 * step * dir)) /
           (2 * step * step * step);
  };
  double d3 = rich(third);
  if (std::abs(d3) <= ars.tol.third_deriv) out.hb_violated = true;
  if (d3 < 0.0) dir = -1.0 * dir;
  out.canonical_direction = dir;
  out.third_derivative = std::abs(d3);
  return out;
}

CriticalPointClass critical_point_class(const Ars& ars, Point2 q) {
  return classify_critical_point(ars, q, [&](Point2 p) { return curvature_jet(ars, p, 0).value(); });
}

}  // namespace ars
