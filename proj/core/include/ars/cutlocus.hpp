#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ars/geodesic.hpp"

namespace ars {

/// Initial geodesic state as a function of the fan parameter a.
using InitialFamily = std::function<GeodesicState(double a)>;

struct FrontMember {
  double a = 0.0;
  GeodesicState s0;
  Geodesic geo;
  bool ok = false;
  std::string error;
};

struct Front {
  std::vector<FrontMember> members;  // a strictly monotone
  InitialFamily family;
  double t_max = 0.0;
  int side = +1;
};

/// Z-source family for f-chart structures: a is the x-coordinate of the
/// start point on the singular curve, the tangent is the canonical
/// (-df/dy, df/dx), and side = +1 selects the upper domain (condition (d)).
InitialFamily z_source_family(const Ars& ars, const Curve& z, int side);

/// Point-source family: a is the angle parameterizing the H = 1/2 covector
/// ellipse at q via p.F1 = cos a, p.F2 = sin a.
InitialFamily point_source_family(const Ars& ars, Point2 q);

Front propagate_front(const Ars& ars, const InitialFamily& family, double a_min,
                      double a_max, int n_a, double t_max, int side = +1,
                      FlowOptions flow = {});

struct CutPoint {
  double a = 0.0;      // parameter of the first-front geodesic
  double a_bar = 0.0;  // parameter of the geodesic it meets
  double t_cut = 0.0;
  Point2 p;
  double conj_margin = 0.0;  // first conjugate time minus t_cut (inf if none)
};

struct CutLocus {
  // one polyline per determinant sign, ordered by |a|
  std::vector<std::vector<CutPoint>> branches;
  std::string source;
};

struct CutOptions {
  int n_t = 160;                    // detection time slices
  double cell_factor = 4.0;         // hash cell = factor * max member spacing
  double newton_tol = 1e-10;        // residual on the meeting-point equations
  std::function<double(double a)> window;  // per-parameter time cap
  bool conjugate_check = true;
  // When both fronts share one family, a geodesic and its fan neighbors meet
  // trivially; pairs closer than gap_factor adjacent spacings are skipped.
  bool same_family = true;
  double gap_factor = 2.5;
};

/// Earliest simultaneous meeting points between the two fronts: spatial-hash
/// candidate pairing per time slice, then Newton on (t, b) for the exact
/// equal-time equal-position solution, bounded by first conjugate times.
CutLocus cut_locus(const Ars& ars, const Front& fa, const Front& fb,
                   CutOptions opts = {});

enum class FitModel { LineThroughOrigin, PowerLaw, CuspPair };

struct FitResult {
  double coeff = 0.0;
  double exponent = 1.0;
  double max_rel_residual = 0.0;
};

/// Least-squares asymptote fit of a branch in the model's natural
/// coordinates (x as a function of y).  PowerLaw needs |y| to span at least
/// one decade.  CuspPair fits a power law per x-sign and returns both.
std::vector<FitResult> fit_asymptote(const std::vector<CutPoint>& branch, FitModel model);

}  // namespace ars
