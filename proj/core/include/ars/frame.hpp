#pragma once

#include <array>
#include <memory>

#include "ars/expr.hpp"
#include "ars/jet.hpp"
#include "ars/types.hpp"

namespace ars {

/// Jets at a common center of the four frame components
/// F1 = (a1, a2), F2 = (b1, b2).
struct FrameJets {
  Jet2 a1, a2, b1, b2;
};

/// Source of the orthonormal frame pair of a 2-ARS on a planar chart.
///
/// Everything downstream (classification, curvature, geodesic flow) consumes
/// frames only through local jets, so implementations may be symbolic
/// (expressions) or derived (pushforwards through a diffeomorphism).
class FrameField {
 public:
  virtual ~FrameField() = default;
  virtual FrameJets frame_jets(Point2 center, int order) const = 0;
};

/// Frame given by four expression components.
class ExprFrame : public FrameField {
 public:
  ExprFrame(FieldExpr a1, FieldExpr a2, FieldExpr b1, FieldExpr b2);
  FrameJets frame_jets(Point2 center, int order) const override;

 private:
  FieldExpr a1_, a2_, b1_, b2_;
};

/// The special chart F1 = (1, 0), F2 = (0, f).
class FChartFrame : public FrameField {
 public:
  explicit FChartFrame(FieldExpr f);
  FrameJets frame_jets(Point2 center, int order) const override;
  const FieldExpr& f() const { return f_; }

 private:
  FieldExpr f_;
};

/// Frame of a structure pushed forward through an orientation-preserving
/// diffeomorphism phi given by two expression components.  The component
/// jets at a target point are obtained by numerically inverting phi and
/// composing the transformed base-frame jets with the jet of the inverse map.
class PushforwardFrame : public FrameField {
 public:
  PushforwardFrame(std::shared_ptr<const FrameField> base, FieldExpr phi1, FieldExpr phi2);
  FrameJets frame_jets(Point2 center, int order) const override;

  /// Image of a base-chart point under the diffeomorphism.
  Point2 forward(Point2 p) const;
  /// Preimage, by Newton iteration.
  Point2 inverse(Point2 p) const;

 private:
  std::shared_ptr<const FrameField> base_;
  FieldExpr phi1_, phi2_;
};

struct Tolerances {
  double zero_det = 1e-9;    // "is this determinant zero" (frame-normalized)
  double grad_k = 1e-8;      // R1/R2 split on the gradient norm of K
  double eigen_gap = 1e-6;   // HA: distinct Hessian eigenvalues
  double third_deriv = 1e-8; // HB: third derivative of K along the curve
};

/// A totally oriented 2-ARS on a planar chart.
struct Ars {
  std::shared_ptr<const FrameField> frame;
  bool chart_form = false;   // frame is an FChartFrame
  int orientation_M = +1;    // chart orientation
  int orientation_E = +1;    // bundle orientation of the frame
  Box domain;
  Tolerances tol;

  FrameJets jets(Point2 center, int order) const { return frame->frame_jets(center, order); }

  /// det(F1, F2) as a jet.  Vanishes exactly on the singular set.
  Jet2 det_jet(Point2 center, int order) const;
  double det(Point2 p) const { return det_jet(p, 0).value(); }

  /// In chart_form, the defining function f (det coincides with it).
  const FieldExpr& fchart() const;
};

Ars make_fchart_ars(const std::string& f_text, Box domain = {},
                    int orientation_M = +1, int orientation_E = +1);
Ars make_frame_ars(const std::string& a1, const std::string& a2,
                   const std::string& b1, const std::string& b2,
                   Box domain = {}, int orientation_M = +1, int orientation_E = +1);
/// The same structure seen through the diffeomorphism (phi1, phi2).
Ars pushforward_ars(const Ars& base, const std::string& phi1, const std::string& phi2);

}  // namespace ars
