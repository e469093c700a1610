#include <benchmark/benchmark.h>

#include "ars/curvature.hpp"
#include "ars/elliptic.hpp"
#include "ars/expr.hpp"
#include "ars/geodesic.hpp"
#include "ars/jet.hpp"

namespace {

const ars::Box kBox{-0.6, 0.6, -0.6, 0.6};

void BM_JetProduct(benchmark::State& state) {
  int order = static_cast<int>(state.range(0));
  ars::Point2 c{0.1, -0.2};
  ars::Jet2 a = exp(ars::Jet2::variable_x(c, order) + ars::Jet2::variable_y(c, order));
  ars::Jet2 b = sin(ars::Jet2::variable_x(c, order));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->Arg(4)->Arg(8)->Arg(12);

void BM_ExprJet(benchmark::State& state) {
  ars::FieldExpr f = ars::parse_field("x*exp(0.3*x*y) + sin(y)");
  for (auto _ : state) benchmark::DoNotOptimize(f.jet({0.3, -0.2}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExprJet)->Arg(2)->Arg(6);

void BM_CurvatureJet(benchmark::State& state) {
  ars::Ars a = ars::make_fchart_ars("x*exp(0.3*x*y)", kBox);
  for (auto _ : state) benchmark::DoNotOptimize(ars::curvature_jet(a, {0.3, -0.2}, 2));
}
BENCHMARK(BM_CurvatureJet);

void BM_GeodesicFlow(benchmark::State& state) {
  ars::Ars a = ars::make_fchart_ars("y - x^2*(1+x)", kBox);
  ars::GeodesicState s0{0.3, 0.2, -0.8, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(ars::flow_geodesic(a, s0, 0.2));
}
BENCHMARK(BM_GeodesicFlow);

void BM_Jacobi(benchmark::State& state) {
  double u = 0.0;
  for (auto _ : state) {
    u += 0.37;
    benchmark::DoNotOptimize(ars::jacobi_cn_sn_dn(u));
  }
}
BENCHMARK(BM_Jacobi);

}  // namespace

BENCHMARK_MAIN();
