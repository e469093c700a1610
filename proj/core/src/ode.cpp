#include "ars/ode.hpp"

#include <algorithm>
#include <cmath>

namespace ars {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;

constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace

void DenseStep::eval(double t, std::vector<double>* out) const {
  double s = (t - t0) / h;
  double s1 = 1.0 - s;
  std::size_t n = rcont[0].size();
  out->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    (*out)[i] = rcont[0][i] +
                s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
  }
}

std::vector<double> OdeSolution::at(double time) const {
  if (dense.empty()) return y.front();
  // locate the covering step (t may run in either direction)
  bool fwd = t.back() >= t.front();
  if ((fwd && time <= t.front()) || (!fwd && time >= t.front())) return y.front();
  if ((fwd && time >= t.back()) || (!fwd && time <= t.back())) return y.back();
  std::size_t idx = 0;
  if (fwd) {
    auto it = std::upper_bound(t.begin(), t.end(), time);
    idx = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  } else {
    auto it = std::upper_bound(t.begin(), t.end(), time,
                               [](double a, double b) { return a > b; });
    idx = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  }
  idx = std::min(idx, dense.size() - 1);
  std::vector<double> out;
  dense[idx].eval(time, &out);
  return out;
}

OdeSolution integrate_dopri5(const OdeRhs& rhs, double t0, double t1,
                             std::vector<double> y0, OdeOptions opts) {
  const std::size_t n = y0.size();
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double hmax = opts.h_max > 0.0 ? opts.h_max : span;

  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < std::min(n, opts.scale.size()); ++i)
    if (opts.scale[i] > 0.0) w[i] = opts.scale[i];

  OdeSolution sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  if (span == 0.0) return sol;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> y(y0), ytmp(n), y1(n);
  double t = t0;
  rhs(t, y, k1);

  double h = std::min(opts.h_init, hmax);
  double facold = 1e-4;
  const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
  bool last_rejected = false;

  for (long step = 0; step < opts.max_steps; ++step) {
    if (h < 1e-16 * std::max(1.0, std::abs(t))) throw Error("integrator step size underflow");
    bool last = false;
    if (std::abs(t1 - t) <= h) {
      h = std::abs(t1 - t);
      last = true;
    }
    double hd = dir * h;

    auto stage = [&](double frac, std::vector<double>& k,
                     std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (const auto& [kv, cc] : terms) acc += hd * cc * (*kv)[i];
        ytmp[i] = acc;
      }
      rhs(t + frac * hd, ytmp, k);
    };
    stage(c2, k2, {{&k1, a21}});
    stage(c3, k3, {{&k1, a31}, {&k2, a32}});
    stage(c4, k4, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
    stage(c5, k5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
    stage(1.0, k6, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + hd * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + hd, y1, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sk = (opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y1[i]))) * w[i];
      err += (e / sk) * (e / sk);
    }
    err = std::sqrt(err / static_cast<double>(n));

    double fac11 = std::pow(err, expo1);
    if (err <= 1.0) {
      // accept; build the dense interpolant before advancing
      DenseStep ds;
      ds.t0 = t;
      ds.h = hd;
      for (auto& r : ds.rcont) r.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        double dy = y1[i] - y[i];
        double bspl = hd * k1[i] - dy;
        ds.rcont[0][i] = y[i];
        ds.rcont[1][i] = dy;
        ds.rcont[2][i] = bspl;
        ds.rcont[3][i] = dy - hd * k7[i] - bspl;
        ds.rcont[4][i] = hd * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                               d7 * k7[i]);
      }
      sol.dense.push_back(std::move(ds));

      t += hd;
      y.swap(y1);
      k1.swap(k7);
      sol.t.push_back(t);
      sol.y.push_back(y);
      if (last) return sol;

      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(0.2, std::min(10.0, fac / safe));
      facold = std::max(err, 1e-4);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      h = std::min(hnew, hmax);
      last_rejected = false;
    } else {
      h = h / std::min(10.0, fac11 / safe);
      last_rejected = true;
    }
  }
  throw Error("integrator exceeded the step budget");
}

}  // namespace ars
