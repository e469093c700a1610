#include "ars/classify.hpp"

#include <algorithm>
#include <cmath>

#include "ars/curvature.hpp"

namespace ars {

const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::RiemannianR1: return "RiemannianR1";
    case PointKind::RiemannianR2: return "RiemannianR2";
    case PointKind::Grushin: return "Grushin";
    case PointKind::TangencyPlus: return "TangencyPlus";
    case PointKind::TangencyMinus: return "TangencyMinus";
    case PointKind::Degenerate: return "Degenerate";
  }
  return "?";
}

ScalarJetField det_field(const Ars& ars) {
  return [ars](Point2 q, int order) { return ars.det_jet(q, order); };
}

namespace {

struct Bracket {
  Jet2 x, y;  // components of [F, G]
};

// [F, G] = (F . grad) G - (G . grad) F, one jet order below the inputs.
Bracket bracket(const Jet2& f1, const Jet2& f2, const Jet2& g1, const Jet2& g2) {
  int n = f1.order() - 1;
  auto d = [&](const Jet2& a, const Jet2& b, const Jet2& g) {
    return a.truncated(n) * g.derivative_x() + b.truncated(n) * g.derivative_y();
  };
  return {d(f1, f2, g1) - d(g1, g2, f1), d(f1, f2, g2) - d(g1, g2, f2)};
}

double det2(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Distribution direction at or near Z: the larger frame vector.
Vec2 dominant(const FrameJets& fj) {
  Vec2 F1{fj.a1.value(), fj.a2.value()};
  Vec2 F2{fj.b1.value(), fj.b2.value()};
  return norm(F1) >= norm(F2) ? F1 : F2;
}

// Fold a relative angle into (-pi/2, pi/2]: distribution directions are lines.
double fold_line_angle(double a) {
  while (a > M_PI_2) a -= M_PI;
  while (a <= -M_PI_2) a += M_PI;
  return a;
}

// Desired unit tangent of Z at p when Z is oriented as the boundary of M-.
Vec2 boundary_tangent(const Ars& ars, Point2 p) {
  Jet2 d = ars.det_jet(p, 1);
  Vec2 g{d.coeff(1, 0), d.coeff(0, 1)};
  if (norm(g) == 0.0) throw Error("degenerate singular set normal");
  Vec2 n_out = (ars.orientation_E > 0 ? 1.0 : -1.0) * normalized(g);
  Vec2 t = perp(n_out);
  return ars.orientation_M > 0 ? t : -1.0 * t;
}

}  // namespace

PointClass point_class(const Ars& ars, Point2 q) {
  FrameJets fj = ars.jets(q, 2);
  Vec2 F1{fj.a1.value(), fj.a2.value()};
  Vec2 F2{fj.b1.value(), fj.b2.value()};

  Bracket b12 = bracket(fj.a1, fj.a2, fj.b1, fj.b2);
  Vec2 B{b12.x.value(), b12.y.value()};
  Bracket b112 = bracket(fj.a1.truncated(1), fj.a2.truncated(1), b12.x, b12.y);
  Bracket b212 = bracket(fj.b1.truncated(1), fj.b2.truncated(1), b12.x, b12.y);
  Vec2 BB1{b112.x.value(), b112.y.value()};
  Vec2 BB2{b212.x.value(), b212.y.value()};

  double m = std::max({norm(F1), norm(F2), norm(B), norm(BB1), norm(BB2), 1.0});
  double m2 = m * m;

  PointClass out;
  out.witnesses.d0 = det2(F1, F2) / m2;
  out.witnesses.d1 = std::max(std::abs(det2(F1, B)), std::abs(det2(F2, B))) / m2;
  out.witnesses.d2 = std::max({std::abs(det2(F1, BB1)), std::abs(det2(F2, BB1)),
                               std::abs(det2(F1, BB2)), std::abs(det2(F2, BB2))}) /
                     m2;

  const double tol = ars.tol.zero_det;
  if (std::abs(out.witnesses.d0) > tol) {
    GradK g = grad_K(ars, q);
    out.witnesses.grad_k_norm = std::sqrt(g.norm2);
    if (out.witnesses.grad_k_norm > ars.tol.grad_k) {
      out.kind = PointKind::RiemannianR1;
    } else {
      out.kind = PointKind::RiemannianR2;
      try {
        out.witnesses.ha_degenerate = critical_point_class(ars, q).ha_violated;
      } catch (const Error&) {
        out.witnesses.ha_degenerate = true;
      }
    }
    return out;
  }
  if (out.witnesses.d1 > tol) {
    out.kind = PointKind::Grushin;
    return out;
  }
  if (out.witnesses.d2 > tol) {
    out.kind = tangency_type(ars, q);
    return out;
  }
  out.kind = PointKind::Degenerate;
  return out;
}

Curve trace_singular_set(const Ars& ars, Point2 seed, TraceOptions opts) {
  return trace_zero_set(det_field(ars), seed, ars.domain, opts);
}

std::vector<Point2> find_tangencies(const Ars& ars, const Curve& z) {
  std::vector<Point2> out;
  std::size_t best_idx = 0;
  double best_align = 1.0;
  bool in_cluster = false;
  const double flag = 0.05;

  // Joint Newton zero of det and its derivative along the distribution.
  auto polish = [&](Point2& p) -> bool {
    for (int it = 0; it < 40; ++it) {
      Jet2 d = ars.det_jet(p, 2);
      FrameJets fj = ars.jets(p, 1);
      bool use_f1 = norm(Vec2{fj.a1.value(), fj.a2.value()}) >=
                    norm(Vec2{fj.b1.value(), fj.b2.value()});
      const Jet2& v1 = use_f1 ? fj.a1 : fj.b1;
      const Jet2& v2 = use_f1 ? fj.a2 : fj.b2;
      Jet2 g2 = v1 * d.derivative_x().truncated(1) + v2 * d.derivative_y().truncated(1);
      double r1 = d.value(), r2 = g2.value();
      double j11 = d.coeff(1, 0), j12 = d.coeff(0, 1);
      double j21 = g2.coeff(1, 0), j22 = g2.coeff(0, 1);
      double det = j11 * j22 - j12 * j21;
      if (det == 0.0) return false;
      double dx = (j22 * r1 - j12 * r2) / det;
      double dy = (-j21 * r1 + j11 * r2) / det;
      p.x -= dx;
      p.y -= dy;
      if (std::abs(dx) + std::abs(dy) < 1e-13 * (1.0 + std::abs(p.x) + std::abs(p.y)))
        return std::abs(ars.det_jet(p, 0).value()) < 1e-9;
    }
    return false;
  };
  auto polish_point = [&](std::size_t idx) {
    Point2 p = z.samples[idx].p;
    if (!polish(p)) return;
    for (const auto& q : out)
      if (norm(q - p) < 1e-6) return;
    out.push_back(p);
  };

  for (std::size_t i = 0; i < z.samples.size(); ++i) {
    Jet2 d = ars.det_jet(z.samples[i].p, 1);
    Vec2 g{d.coeff(1, 0), d.coeff(0, 1)};
    Vec2 v = dominant(ars.jets(z.samples[i].p, 0));
    double align = (norm(g) == 0.0 || norm(v) == 0.0)
                       ? 0.0
                       : std::abs(dot(normalized(v), normalized(g)));
    if (align < flag) {
      if (!in_cluster || align < best_align) {
        best_align = align;
        best_idx = i;
      }
      in_cluster = true;
    } else if (in_cluster) {
      polish_point(best_idx);
      in_cluster = false;
      best_align = 1.0;
    }
  }
  if (in_cluster) polish_point(best_idx);
  return out;
}

PointKind tangency_type(const Ars& ars, Point2 q) {
  const double w = 0.12;
  Box box{std::max(ars.domain.xmin, q.x - w), std::min(ars.domain.xmax, q.x + w),
          std::max(ars.domain.ymin, q.y - w), std::min(ars.domain.ymax, q.y + w)};
  Curve z = trace_zero_set(det_field(ars), q, box);
  if (z.samples.size() < 8) throw Error("singular set too short to read the rotation");

  std::size_t mid = z.nearest(q);
  if (dot(z.samples[mid].tangent, boundary_tangent(ars, z.samples[mid].p)) < 0.0) {
    z.reverse();
    mid = z.samples.size() - 1 - mid;
  }

  // Relative line angle of the distribution against the oriented tangent,
  // unwrapped over a window around q.
  double s_mid = z.samples[mid].param;
  const double window = 0.05;
  double theta_prev = 0.0;
  bool first = true;
  double s_lo = 0, s_hi = 0, th_lo = 0, th_hi = 0;
  for (const auto& cs : z.samples) {
    if (std::abs(cs.param - s_mid) > window) continue;
    Vec2 v = dominant(ars.jets(cs.p, 0));
    double a = std::atan2(cross(cs.tangent, v), dot(cs.tangent, v));
    a = fold_line_angle(a);
    if (!first) {
      while (a - theta_prev > M_PI_2) a -= M_PI;
      while (a - theta_prev < -M_PI_2) a += M_PI;
    } else {
      s_lo = cs.param;
      th_lo = a;
      first = false;
    }
    theta_prev = a;
    s_hi = cs.param;
    th_hi = a;
  }
  if (s_hi - s_lo < 1e-4) throw Error("window too small to read the rotation");
  double slope = (th_hi - th_lo) / (s_hi - s_lo);
  if (std::abs(slope) < 1e-4)
    throw Error("ambiguous rotation of the distribution along the singular set");
  return slope > 0.0 ? PointKind::TangencyPlus : PointKind::TangencyMinus;
}

}  // namespace ars
