#pragma once

#include <vector>

#include "ars/frame.hpp"
#include "ars/tracer.hpp"

namespace ars {

enum class PointKind {
  RiemannianR1,
  RiemannianR2,
  Grushin,
  TangencyPlus,
  TangencyMinus,
  Degenerate,
};

const char* to_string(PointKind k);

struct PointClass {
  PointKind kind = PointKind::Degenerate;
  struct Witnesses {
    double d0 = 0.0;  // det(F1, F2), frame-normalized
    double d1 = 0.0;  // best determinant pairing a frame vector with [F1, F2]
    double d2 = 0.0;  // same with the double brackets
    double grad_k_norm = 0.0;  // ||grad K|| at Riemannian points
    bool ha_degenerate = false;  // R2 point with a degenerate Hessian of K
  } witnesses;
};

/// Step-3 bracket classification of q (Riemannian / Grushin / tangency),
/// thresholded at tol.zero_det on frame-normalized determinants.  Returns
/// Degenerate instead of throwing when every determinant is below tol.
PointClass point_class(const Ars& ars, Point2 q);

/// Traces {det(F1,F2) = 0} through seed within the domain box.  Samples
/// satisfy |det| below the corrector tolerance; markers flag gradient
/// degeneracies.
Curve trace_singular_set(const Ars& ars, Point2 seed, TraceOptions opts = {});

/// Points of an already-traced singular curve where the distribution is
/// tangent to it, polished as joint zeros of det and its derivative along
/// the distribution.
std::vector<Point2> find_tangencies(const Ars& ars, const Curve& z);

/// Rotation sign of the distribution along Z at a tangency point q, with Z
/// oriented as the boundary of M- (the region where the frame reverses the
/// chart orientation).  Positive rotation is TangencyPlus.
PointKind tangency_type(const Ars& ars, Point2 q);

/// det(F1,F2) as a ScalarJetField, for the shared tracer.
ScalarJetField det_field(const Ars& ars);

}  // namespace ars
