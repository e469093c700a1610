#include "ars/jet.hpp"

#include <cmath>

namespace ars {

namespace {

void check_compatible(const Jet2& a, const Jet2& b) {
  if (a.order() != b.order() || !(a.center() == b.center()))
    throw Error("jet arithmetic on incompatible jets");
}

}  // namespace

Jet2::Jet2(Point2 center, int order) : center_(center), order_(order) {
  if (order < 0 || order > kMaxOrder)
    throw Error("jet order out of range [0, 12]: " + std::to_string(order));
  coeffs_.assign(static_cast<std::size_t>((order + 1) * (order + 2) / 2), 0.0);
}

Jet2 Jet2::constant(Point2 center, int order, double value) {
  Jet2 j(center, order);
  j.coeffs_[0] = value;
  return j;
}

Jet2 Jet2::variable_x(Point2 center, int order) {
  Jet2 j(center, order);
  j.coeffs_[0] = center.x;
  if (order >= 1) j.at(1, 0) = 1.0;
  return j;
}

Jet2 Jet2::variable_y(Point2 center, int order) {
  Jet2 j(center, order);
  j.coeffs_[0] = center.y;
  if (order >= 1) j.at(0, 1) = 1.0;
  return j;
}

double Jet2::partial(int i, int j) const {
  double f = 1.0;
  for (int k = 2; k <= i; ++k) f *= k;
  for (int k = 2; k <= j; ++k) f *= k;
  return coeff(i, j) * f;
}

Jet2 Jet2::truncated(int new_order) const {
  if (new_order >= order_) {
    Jet2 out(center_, new_order);
    for (int i = 0; i <= order_; ++i)
      for (int j = 0; i + j <= order_; ++j) out.at(i, j) = coeff(i, j);
    return out;
  }
  Jet2 out(center_, new_order);
  for (int i = 0; i <= new_order; ++i)
    for (int j = 0; i + j <= new_order; ++j) out.at(i, j) = coeff(i, j);
  return out;
}

Jet2 Jet2::derivative_x() const {
  if (order_ == 0) return Jet2::constant(center_, 0, 0.0);
  Jet2 out(center_, order_ - 1);
  for (int i = 0; i < order_; ++i)
    for (int j = 0; i + j < order_; ++j)
      out.at(i, j) = (i + 1) * coeff(i + 1, j);
  return out;
}

Jet2 Jet2::derivative_y() const {
  if (order_ == 0) return Jet2::constant(center_, 0, 0.0);
  Jet2 out(center_, order_ - 1);
  for (int i = 0; i < order_; ++i)
    for (int j = 0; i + j < order_; ++j)
      out.at(i, j) = (j + 1) * coeff(i, j + 1);
  return out;
}

Jet2 Jet2::operator-() const {
  Jet2 out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet2& Jet2::operator+=(const Jet2& rhs) {
  check_compatible(*this, rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
  check_compatible(*this, rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet2& Jet2::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet2& Jet2::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  check_compatible(a, b);
  const int n = a.order();
  Jet2 out(a.center(), n);
  for (int i1 = 0; i1 <= n; ++i1)
    for (int j1 = 0; i1 + j1 <= n; ++j1) {
      double c1 = a.coeff(i1, j1);
      if (c1 == 0.0) continue;
      for (int i2 = 0; i1 + j1 + i2 <= n; ++i2)
        for (int j2 = 0; i1 + j1 + i2 + j2 <= n; ++j2)
          out.at(i1 + i2, j1 + j2) += c1 * b.coeff(i2, j2);
    }
  return out;
}

Jet2 reciprocal(const Jet2& a) {
  double v = a.value();
  if (v == 0.0) throw DomainError("jet reciprocal of zero");
  // 1/(v + w) = (1/v) sum_k (-w/v)^k
  std::vector<double> series(static_cast<std::size_t>(a.order()) + 1);
  double t = 1.0 / v;
  for (int k = 0; k <= a.order(); ++k) {
    series[static_cast<std::size_t>(k)] = t;
    t *= -1.0 / v;
  }
  return a.compose_series(series);
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

Jet2 operator/(double s, const Jet2& b) { return reciprocal(b) * s; }

Jet2 Jet2::pow_int(long long e) const {
  if (e < 0) return reciprocal(*this).pow_int(-e);
  Jet2 result = Jet2::constant(center_, order_, 1.0);
  Jet2 base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

Jet2 Jet2::compose_series(const std::vector<double>& series) const {
  Jet2 w = *this;
  w.coeffs_[0] = 0.0;
  Jet2 r = Jet2::constant(center_, order_, 0.0);
  for (std::size_t k = series.size(); k-- > 0;) {
    r = r * w;
    r += series[k];
  }
  return r;
}

Jet2 Jet2::compose_map(const Jet2& dx, const Jet2& dy) const {
  check_compatible(dx, dy);
  const int n = dx.order();
  // Powers of the offsets, truncated.
  std::vector<Jet2> px, py;
  px.reserve(static_cast<std::size_t>(order_) + 1);
  py.reserve(static_cast<std::size_t>(order_) + 1);
  px.push_back(Jet2::constant(dx.center(), n, 1.0));
  py.push_back(Jet2::constant(dx.center(), n, 1.0));
  for (int k = 1; k <= order_; ++k) {
    px.push_back(px.back() * dx);
    py.push_back(py.back() * dy);
  }
  Jet2 r = Jet2::constant(dx.center(), n, 0.0);
  for (int i = 0; i <= order_; ++i)
    for (int j = 0; i + j <= order_; ++j) {
      double c = coeff(i, j);
      if (c == 0.0) continue;
      r += c * (px[static_cast<std::size_t>(i)] * py[static_cast<std::size_t>(j)]);
    }
  return r;
}

namespace {

Jet2 compose_analytic(const Jet2& a, const std::vector<double>& series) {
  return a.compose_series(series);
}

}  // namespace

Jet2 exp(const Jet2& a) {
  double v = std::exp(a.value());
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  double t = v;
  for (int k = 0; k <= a.order(); ++k) {
    s[static_cast<std::size_t>(k)] = t;
    t /= (k + 1);
  }
  return compose_analytic(a, s);
}

Jet2 log(const Jet2& a) {
  double v = a.value();
  if (v <= 0.0) throw DomainError("log of non-positive value");
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  s[0] = std::log(v);
  double sign = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    s[static_cast<std::size_t>(k)] = sign / (k * std::pow(v, k));
    sign = -sign;
  }
  return compose_analytic(a, s);
}

Jet2 sin(const Jet2& a) {
  double v = a.value();
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    double d;
    switch (k % 4) {
      case 0: d = std::sin(v); break;
      case 1: d = std::cos(v); break;
      case 2: d = -std::sin(v); break;
      default: d = -std::cos(v); break;
    }
    s[static_cast<std::size_t>(k)] = d / fact;
  }
  return compose_analytic(a, s);
}

Jet2 cos(const Jet2& a) {
  double v = a.value();
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    double d;
    switch (k % 4) {
      case 0: d = std::cos(v); break;
      case 1: d = -std::sin(v); break;
      case 2: d = -std::cos(v); break;
      default: d = std::sin(v); break;
    }
    s[static_cast<std::size_t>(k)] = d / fact;
  }
  return compose_analytic(a, s);
}

Jet2 sqrt(const Jet2& a) {
  double v = a.value();
  if (v < 0.0 || (v == 0.0 && a.order() > 0))
    throw DomainError("sqrt of non-positive value");
  std::vector<double> s(static_cast<std::size_t>(a.order()) + 1);
  // binom(1/2, k) v^{1/2 - k}
  double coeff = std::sqrt(v);
  s[0] = coeff;
  double binom = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    binom *= (0.5 - (k - 1)) / k;
    s[static_cast<std::size_t>(k)] = binom * std::sqrt(v) / std::pow(v, k);
  }
  return compose_analytic(a, s);
}

}  // namespace ars
