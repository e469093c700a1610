#pragma once

#include <functional>
#include <vector>

#include "ars/jet.hpp"
#include "ars/types.hpp"

namespace ars {

struct CurveSample {
  double param = 0.0;  // cumulative Euclidean arclength from the first sample
  Point2 p;
  Vec2 tangent;  // unit, pointing toward increasing param
};

struct Curve {
  std::vector<CurveSample> samples;
  bool closed = false;
  bool arclength = true;
  // Sample indices where tracing hit a degeneracy (vanishing field gradient)
  // or a caller-defined flag condition.  Not errors.
  std::vector<std::size_t> markers;

  std::size_t nearest(Point2 q) const;
  /// Cubic Hermite interpolation at parameter s (clamped).
  Point2 at(double s) const;
  /// Unit tangent of the Hermite interpolant at parameter s.
  Vec2 tangent_at(double s) const;
  double length() const { return samples.empty() ? 0.0 : samples.back().param; }
  void reverse();
};

/// A scalar field queried through local jets (order >= 1 required).
using ScalarJetField = std::function<Jet2(Point2, int)>;

struct TraceOptions {
  double step_min = 1e-5;
  double step_max = 1e-2;
  double step_init = 1e-3;
  double corrector_tol = 1e-11;
  double grad_tol = 1e-8;  // below this gradient norm the trace stops with a marker
  int max_samples = 400000;
  // optional early-stop predicate; a true return ends that direction with a marker
  std::function<bool(Point2)> stop;
};

/// Tangent-predictor / Newton-corrector trace of the connected component of
/// {field = 0} through seed, clipped to box.  The seed is first projected
/// onto the zero set; a seed that fails to converge is rejected.  Tracing
/// stops at the box boundary, on closure, or at a gradient degeneracy
/// (partial curve plus marker).
Curve trace_zero_set(const ScalarJetField& field, Point2 seed, Box box,
                     TraceOptions opts = {});

/// One Newton projection of q onto {field = 0} along the field gradient.
/// Returns false if the iteration fails to reach opts tolerance.
bool project_to_zero(const ScalarJetField& field, Point2& q, double tol,
                     int max_iter = 40);

}  // namespace ars
