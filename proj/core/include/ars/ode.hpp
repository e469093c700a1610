#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ars/types.hpp"

namespace ars {

using OdeRhs =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double h_init = 1e-4;
  double h_max = 0.0;  // 0: |t1 - t0|
  // Optional per-component weights multiplying the error scale; larger
  // weight means looser control on that component.
  std::vector<double> scale;
  long max_steps = 5'000'000;
};

/// Quartic dense-output interpolant over one accepted step.
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  std::array<std::vector<double>, 5> rcont;

  void eval(double t, std::vector<double>* out) const;
};

struct OdeSolution {
  std::vector<double> t;                // accepted times, t.front() = t0
  std::vector<std::vector<double>> y;   // states at those times
  std::vector<DenseStep> dense;         // dense[i] covers [t[i], t[i+1]]

  std::vector<double> at(double time) const;
  const std::vector<double>& final() const { return y.back(); }
};

/// Dormand-Prince 5(4) with PI step control and dense output.
/// Integrates from t0 to t1 (either direction); lands on t1 exactly.
OdeSolution integrate_dopri5(const OdeRhs& rhs, double t0, double t1,
                             std::vector<double> y0, OdeOptions opts = {});

}  // namespace ars
