#pragma once

#include <functional>

#include "ars/frame.hpp"

namespace ars {

/// Gaussian curvature of the structure as a jet at q (q must be off the
/// singular set).  In chart form this is (-2 f_x^2 + f f_xx)/f^2; for
/// general frames the structure functions c1, c2 of [F1,F2] = c1 F1 + c2 F2
/// feed the orthonormal-frame formula K = F1(c2) - F2(c1) - c1^2 - c2^2,
/// whose sign is pinned to the chart-form expression by the test suite.
Jet2 curvature_jet(const Ars& ars, Point2 q, int order);

/// Forces the general-frame path even in chart form (oracle cross-checks).
Jet2 curvature_jet_frame_path(const Ars& ars, Point2 q, int order);

double gauss_curvature(const Ars& ars, Point2 q);

struct GradK {
  Vec2 grad;        // chart-coordinate vector (e1 K) F1 + (e2 K) F2
  double e1K, e2K;  // frame components
  double norm2;     // A = ||grad K||^2 = e1K^2 + e2K^2
};

GradK grad_K(const Ars& ars, Point2 q);

/// A = ||grad K||^2 as a jet at q.
Jet2 grad_norm2_jet(const Ars& ars, Point2 q, int order);

struct SpadeValue {
  double raw;     // S = (e2 A)(e1 K) - (e1 A)(e2 K), undefined on Z
  double desing;  // h~ = S * det(F1,F2)^8, bounded across Z
};

/// The crest/valley collinearity indicator between grad K and grad A.
SpadeValue spade_indicator(const Ars& ars, Point2 q);
Jet2 spade_raw_jet(const Ars& ars, Point2 q, int order);
Jet2 spade_desing_jet(const Ars& ars, Point2 q, int order);

enum class CriticalKind { Max, Min, Saddle };

struct CriticalPointClass {
  CriticalKind kind;
  double eigenvalues[2];     // ascending
  Vec2 eigendirections[2];   // matching order, unit, in frame coordinates
                             // mapped to chart vectors
  Vec2 canonical_direction;  // crest (max/saddle) or valley (min), oriented
                             // so the third derivative of K along it is > 0
  bool is_crest;             // false: the canonical curve is a valley
  bool ha_violated = false;  // degenerate Hessian / eigen gap below tol
  bool hb_violated = false;  // third derivative below tol
  double third_derivative = 0.0;
};

/// Classifies a critical point of K (max/min/saddle) and returns the
/// crest/valley direction selected by the canonical rules.  `k_field`
/// may override the curvature (hook for testing the classifier on a
/// synthetic field); directions are measured along the frame at q.
CriticalPointClass critical_point_class(const Ars& ars, Point2 q);
CriticalPointClass classify_critical_point(
    const Ars& ars, Point2 q,
    const std::function<double(Point2)>& k_field);

}  // namespace ars
