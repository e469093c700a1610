#pragma once

#include <vector>

#include "ars/types.hpp"

namespace ars {

/// Truncated bivariate Taylor expansion around a center point.
///
/// Coefficients are stored for all (i, j) with i + j <= order; the entry
/// c[i][j] is the Taylor coefficient of (x - cx)^i (y - cy)^j, i.e. the
/// partial derivative divided by i! j!.  All arithmetic truncates at the
/// common order.  Instances are immutable in practice (operations return
/// fresh jets) and safe to share between threads.
class Jet2 {
 public:
  static constexpr int kMaxOrder = 12;

  Jet2(Point2 center, int order);

  static Jet2 constant(Point2 center, int order, double value);
  static Jet2 variable_x(Point2 center, int order);
  static Jet2 variable_y(Point2 center, int order);

  int order() const { return order_; }
  Point2 center() const { return center_; }
  std::size_t size() const { return coeffs_.size(); }

  double value() const { return coeffs_[0]; }
  double coeff(int i, int j) const { return coeffs_[index(i, j)]; }
  double& at(int i, int j) { return coeffs_[index(i, j)]; }

  /// The exact partial derivative d^i_x d^j_y at the center (coeff * i! j!).
  double partial(int i, int j) const;

  Jet2 truncated(int new_order) const;
  Jet2 derivative_x() const;  // order drops by one
  Jet2 derivative_y() const;

  Jet2 operator-() const;
  Jet2& operator+=(const Jet2& rhs);
  Jet2& operator-=(const Jet2& rhs);
  Jet2& operator+=(double s);
  Jet2& operator-=(double s);
  Jet2& operator*=(double s);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator+(Jet2 a, double s) { return a += s; }
  friend Jet2 operator+(double s, Jet2 a) { return a += s; }
  friend Jet2 operator-(Jet2 a, double s) { return a -= s; }
  friend Jet2 operator-(double s, const Jet2& a) { return (-a) += s; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
  friend Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(double s, const Jet2& b);

  /// Integer power by repeated squaring; negative exponents go through the
  /// reciprocal series.
  Jet2 pow_int(long long e) const;

  /// Composes a univariate analytic series sum_k series[k] * (this - value)^k.
  Jet2 compose_series(const std::vector<double>& series) const;

  /// Evaluates this jet, seen as a polynomial in its local offsets, on two
  /// jets (dx, dy) sharing a common center.  Used for jet-level composition
  /// with maps: dx and dy must carry the offsets of the inner map, i.e. have
  /// value() == 0 when the inner map sends its center to this->center().
  Jet2 compose_map(const Jet2& dx, const Jet2& dy) const;

 private:
  static int index(int i, int j) {
    int d = i + j;
    return d * (d + 1) / 2 + j;
  }

  Point2 center_;
  int order_;
  std::vector<double> coeffs_;
};

Jet2 reciprocal(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 sqrt(const Jet2& a);

}  // namespace ars
