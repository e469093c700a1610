#pragma once

#include <string>
#include <vector>

#include "ars/classify.hpp"
#include "ars/curvature.hpp"
#include "ars/geodesic.hpp"

namespace ars {

struct GridSpec {
  double h = 1e-3;  // lattice spacing in both chart directions
  int nx = 10;      // xbar runs over [-nx h, nx h] + x_offset
  int ny = 10;
  double x_offset = 0.0;
  double y_offset = 0.0;

  double xbar(int i) const { return x_offset + h * (i - nx); }
  double ybar(int j) const { return y_offset + h * (j - ny); }
  int cols() const { return 2 * nx + 1; }
  int rows() const { return 2 * ny + 1; }
};

/// Transversal curve selected by the canonical rules for the point kind at
/// q: the K-level set (R1), the crest/valley (R2), the singular set with
/// bracket-fixed speed (G), or the spade branch through the tangency with
/// the second-derivative reparameterization (T).  ybase is the curve
/// parameter mapped to ybar = 0.
struct CanonicalCurve {
  Curve curve;
  double ybase = 0.0;
  PointKind kind = PointKind::Degenerate;
};

CanonicalCurve canonical_curve(const Ars& ars, Point2 q);

/// The invariant at a single chart point: flows the transversal covector at
/// curve(ybase + ybar) for time xbar and divides the frame area density by
/// the chart-map Jacobian obtained from the variational flow.
double f_tilde_at(const Ars& ars, const Curve& curve, double ybase, double xbar,
                  double ybar, double* det_DE = nullptr, Point2* E_point = nullptr);

struct ChartResult {
  Ars ars;
  Curve curve;
  double ybase = 0.0;
  PointClass point_kind;
  GridSpec grid;
  // indexed [i][j] = (xbar(i), ybar(j))
  std::vector<std::vector<double>> f_tilde;
  std::vector<std::vector<double>> det_DE;
  std::vector<std::vector<Point2>> E_points;

  double at(int i, int j) const { return f_tilde[i][j]; }
};

ChartResult run_procedure1(const Ars& ars, const CanonicalCurve& curve, GridSpec grid);

struct ConditionEntry {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct ConditionReport {
  std::string suite;
  std::vector<ConditionEntry> entries;
  bool pass = false;
};

/// Evaluates the condition suite matching the chart's point kind, with
/// derivative stencils computed from on-demand invariant evaluations
/// (not the stored grid, whose spacing is too fine for high derivatives).
ConditionReport verify_conditions(const ChartResult& chart);

}  // namespace ars
