#include "ars/elliptic.hpp"

#include <cmath>
#include <vector>

namespace ars {

namespace {

constexpr double kParameterM = 0.5;  // modulus 1/sqrt(2)

struct AgmLadder {
  std::vector<double> a, c;
  double K;
};

const AgmLadder& ladder() {
  static const AgmLadder L = [] {
    AgmLadder l;
    double a = 1.0;
    double b = std::sqrt(1.0 - kParameterM);
    double c = std::sqrt(kParameterM);
    l.a.push_back(a);
    l.c.push_back(c);
    // rounding can stall a - b at one ulp, so stop once c no longer shrinks
    for (int n = 0; n < 60 && std::abs(c) > 1e-17 * a; ++n) {
      double an = 0.5 * (a + b);
      double cn = 0.5 * (a - b);
      if (std::abs(cn) >= std::abs(c)) break;
      b = std::sqrt(a * b);
      a = an;
      c = cn;
      l.a.push_back(a);
      l.c.push_back(c);
    }
    l.K = M_PI / (2.0 * a);
    return l;
  }();
  return L;
}

}  // namespace

double elliptic_K_agm() { return ladder().K; }

JacobiValues jacobi_cn_sn_dn(double u) {
  const AgmLadder& l = ladder();
  // range-reduce by the common period 4K for conditioning at large arguments
  double period = 4.0 * l.K;
  u = std::remainder(u, period);

  const std::size_t N = l.a.size() - 1;
  double phi = std::ldexp(l.a[N] * u, static_cast<int>(N));
  for (std::size_t n = N; n >= 1; --n) {
    double s = (l.c[n] / l.a[n]) * std::sin(phi);
    phi = 0.5 * (phi + std::asin(s));
  }
  JacobiValues v;
  v.sn = std::sin(phi);
  v.cn = std::cos(phi);
  // cn / cos(phi_1 - phi_0) is exact but cancels catastrophically near the
  // quarter period; dn > 0 always holds at m = 1/2, so the identity is safe
  v.dn = std::sqrt(1.0 - kParameterM * v.sn * v.sn);
  return v;
}

}  // namespace ars
