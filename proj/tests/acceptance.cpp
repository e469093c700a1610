// End-to-end acceptance checks, one printed line per criterion.
// Exit code is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ars/classify.hpp"
#include "ars/curvature.hpp"
#include "ars/cutlocus.hpp"
#include "ars/elliptic.hpp"
#include "ars/modeljets.hpp"
#include "ars/normalform.hpp"

using namespace ars;

namespace {

const Box kBox{-0.6, 0.6, -0.6, 0.6};

double g_worst_h = 0.0;  // max |H - 1/2| over every trajectory run below

void track_front(const Front& f) {
  for (const FrontMember& m : f.members)
    if (m.ok) g_worst_h = std::max(g_worst_h, m.geo.h_drift);
}

double quadrature_K() {
  auto f = [](double t) { return 1.0 / std::sqrt(1.0 - 0.5 * std::sin(t) * std::sin(t)); };
  double prev = 0.0;
  for (int n = 8; n <= (1 << 20); n *= 2) {
    double h = (M_PI / 2) / n;
    double s = f(0.0) + f(M_PI / 2);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    s *= h / 3.0;
    if (n > 8 && std::abs(s - prev) < 1e-15) return s;
    prev = s;
  }
  return prev;
}

struct Criterion {
  int id;
  const char* what;
  std::function<bool(std::string*)> run;
};

// results of the expensive cut-locus runs, shared between criteria 5, 6, 9
std::vector<CutPoint> g_upper, g_lower;

void run_cuts() {
  Ars a = make_fchart_ars("y - x^2*(1+x)", kBox);
  Curve z = trace_singular_set(a, {0.3, 0.12});

  auto collect = [](const CutLocus& cl, std::vector<CutPoint>* out) {
    for (const auto& br : cl.branches)
      for (const CutPoint& c : br) out->push_back(c);
  };

  {  // upper side, wide fan for the slope plus a fine fan for small a
    InitialFamily fam = z_source_family(a, z, +1);
    CutOptions opts;
    opts.window = [](double aa) { return 3.0 * std::abs(aa) + 0.02; };
    Front wide = propagate_front(a, fam, -0.1, 0.1, 241, 0.2, +1);
    track_front(wide);
    collect(cut_locus(a, wide, wide, opts), &g_upper);
    Front fine = propagate_front(a, fam, -0.012, 0.012, 121, 0.03, +1);
    track_front(fine);
    collect(cut_locus(a, fine, fine, opts), &g_upper);
  }
  {  // lower side
    InitialFamily fam = z_source_family(a, z, -1);
    double K = elliptic_K_agm();
    CutOptions opts;
    // slack above 2K sqrt(a): the partner of a arrives near t = 2K sqrt(a_bar)
    // with a_bar noticeably larger than a, so the window must cover both
    opts.window = [K](double aa) {
      return std::sqrt(std::abs(aa)) * (2.0 * K + 1.0) + 1e-3;
    };
    Front f = propagate_front(a, fam, -0.055, 0.055, 131, 1.0, -1);
    track_front(f);
    collect(cut_locus(a, f, f, opts), &g_lower);
  }
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;
  auto add = [&](int id, const char* what, std::function<bool(std::string*)> run) {
    criteria.push_back({id, what, std::move(run)});
  };

  add(1, "curvature -2/(x+1)^2 on a 41x41 grid, both charts", [](std::string* d) {
    Ars a = make_fchart_ars("x+1", kBox);
    Ars b = make_fchart_ars("1/(x+1)^2", kBox);
    double worst = 0.0;
    for (int i = 0; i < 41; ++i)
      for (int j = 0; j < 41; ++j) {
        Point2 q{-0.4 + 0.8 * i / 40.0, -0.4 + 0.8 * j / 40.0};
        double target = -2.0 / ((q.x + 1) * (q.x + 1));
        worst = std::max(worst, std::abs(gauss_curvature(a, q) - target));
        worst = std::max(worst, std::abs(gauss_curvature(b, q) - target));
      }
    *d = "max err " + sci(worst);
    return worst <= 1e-9;
  });

  add(2, "general-frame curvature vs chart formula, 100 random structures", [](std::string* d) {
    unsigned state = 12345;
    auto u = [&] {  // xorshift; keeps the criterion self-contained
      state ^= state << 13;
      state ^= state >> 17;
      state ^= state << 5;
      return (state % 100000) / 50000.0 - 1.0;
    };
    double worst = 0.0;
    int used = 0;
    while (used < 100) {
      std::ostringstream f;
      f << "1 + " << 0.5 * u() << "*x + " << 0.5 * u() << "*y + " << 0.5 * u() << "*x*y + "
        << 0.5 * u() << "*x^2 + " << 0.5 * u() << "*y^2";
      Ars a = make_fchart_ars(f.str(), kBox);
      Point2 q{0.45 * u(), 0.45 * u()};
      if (std::abs(a.det(q)) < 0.2) continue;
      ++used;
      double k1 = curvature_jet(a, q, 0).value();
      double k2 = curvature_jet_frame_path(a, q, 0).value();
      worst = std::max(worst, std::abs(k1 - k2) / std::max(1.0, std::abs(k1)));
    }
    *d = "max rel err " + sci(worst);
    return worst <= 1e-7;
  });

  add(3, "model jet system vs elliptic closed forms, gamma in {0.5, 1, 2}", [](std::string* d) {
    double worst = 0.0;
    for (double g : {0.5, 1.0, 2.0}) worst = std::max(worst, solve_model_jets(g).closed_form_max_err);
    *d = "max err " + sci(worst);
    return worst <= 1e-8;
  });

  add(4, "elliptic constant: AGM vs quadrature", [](std::string* d) {
    double gap = std::abs(elliptic_K_agm() - quadrature_K());
    *d = "|diff| " + sci(gap);
    return gap <= 1e-12;
  });

  add(5, "upper cut branch: slope -0.5, intersection-time ratio", [](std::string* d) {
    if (g_upper.empty()) run_cuts();
    std::vector<CutPoint> fit_pts;
    for (const CutPoint& c : g_upper)
      if (c.p.y >= 1e-4 && c.p.y <= 1e-2) fit_pts.push_back(c);
    std::vector<FitResult> fits = fit_asymptote(fit_pts, FitModel::LineThroughOrigin);
    double slope = fits.at(0).coeff;

    std::vector<double> ratios;
    for (const CutPoint& c : g_upper) {
      double aa = std::abs(c.a);
      // t_cut = |a| (1 + a/2 + O(a^2)): the correction is odd in a, so the
      // normalizer keeps the sign of a
      if (aa >= 1e-3 && aa <= 1e-2)
        ratios.push_back((c.t_cut / aa - 1.0) / (c.a / 2.0));
    }
    double r = ratios.empty() ? 1e9 : median(ratios);
    std::ostringstream os;
    os << "slope " << slope << ", time ratio " << r << " (" << fit_pts.size() << "+"
       << ratios.size() << " pts)";
    *d = os.str();
    return std::abs(slope + 0.5) <= 0.03 && std::abs(r - 1.0) <= 0.1;
  });

  add(6, "lower cut branch: 2/3 exponent and y-intersection scale", [](std::string* d) {
    if (g_lower.empty()) run_cuts();
    std::vector<FitResult> fits = fit_asymptote(g_lower, FitModel::CuspPair);
    bool exp_ok = true;
    double emax = 0.0;
    for (const FitResult& f : fits) {
      emax = std::max(emax, std::abs(f.exponent - 2.0 / 3.0));
      exp_ok = exp_ok && std::abs(f.exponent - 2.0 / 3.0) <= 0.05;
    }
    double K = elliptic_K_agm();
    std::vector<double> errs;
    for (double eta0 : {0.15, 0.1, 0.05}) {
      // |y| at a = eta0^2 by a local log-log fit over the a > 0 points near
      // the target (the a < 0 side carries larger finite-a corrections)
      double a_target = eta0 * eta0;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (const CutPoint& c : g_lower) {
        if (c.a <= a_target / 1.6 || c.a >= a_target * 1.6) continue;
        double lx = std::log(c.a), ly = std::log(-c.p.y);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, ++n;
      }
      if (n < 3) {
        errs.push_back(1e9);
        continue;
      }
      double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      double lc = (sy - p * sx) / n;
      double y_meas = -std::exp(lc + p * std::log(a_target));
      double ratio = y_meas / (-eta0 * eta0 * eta0 * 4.0 * K / 3.0);
      errs.push_back(std::abs(ratio - 1.0));
    }
    // convergence toward the leading-order scale as eta0 decreases
    bool y_ok = errs[0] >= errs[1] && errs[1] >= errs[2] && errs[2] <= 0.05 && errs[0] <= 0.10;
    std::ostringstream os;
    os << "exponent err " << emax << ", y ratio errs " << errs[0] << " " << errs[1] << " "
       << errs[2] << " (" << g_lower.size() << " pts)";
    *d = os.str();
    return exp_ok && y_ok;
  });

  add(7, "spade branch tangent at the tangency point", [](std::string* d) {
    Ars a = make_fchart_ars("y - x^2*(1+x)", kBox);
    CanonicalCurve cc = canonical_curve(a, {0.0, 0.0});
    Vec2 t = cc.curve.tangent_at(cc.ybase);
    double slope = t.x / t.y;
    *d = "dx/dy " + std::to_string(slope);
    return std::abs(slope + 0.3) <= 0.01;
  });

  add(8, "jet constant 2g1+g2: nonzero, two integrators agree", [](std::string* d) {
    JetSolution j = solve_model_jets(1.0);
    double gap = std::abs(j.two_g1_plus_g2 - j.two_g1_plus_g2_rk4);
    std::ostringstream os;
    os << "value " << j.two_g1_plus_g2 << ", integrator gap " << gap;
    *d = os.str();
    return std::abs(j.two_g1_plus_g2) > 1e-3 && gap <= 1e-8;
  });

  add(9, "no conjugate point before any detected cut, |a| <= 0.05", [](std::string* d) {
    if (g_upper.empty()) run_cuts();
    int checked = 0;
    bool ok = true;
    for (const std::vector<CutPoint>* side : {&g_upper, &g_lower})
      for (const CutPoint& c : *side)
        if (std::abs(c.a) <= 0.05) {
          ++checked;
          ok = ok && c.conj_margin > 0.0;
        }
    *d = std::to_string(checked) + " geodesics";
    return ok && checked > 50;
  });

  add(10, "procedure-1 roundtrip: f~ = xbar + 1 on 21x21", [](std::string* d) {
    Ars a = make_fchart_ars("x+1", kBox);
    CanonicalCurve cc = canonical_curve(a, {0.0, 0.0});
    GridSpec grid;
    ChartResult chart = run_procedure1(a, cc, grid);
    double sup = 0.0;
    for (int i = 0; i < grid.cols(); ++i)
      for (int j = 0; j < grid.rows(); ++j)
        sup = std::max(sup, std::abs(chart.at(i, j) - (grid.xbar(i) + 1.0)));
    for (double yb : {-0.005, 0.0, 0.005}) {
      GeodesicState s = chart_map_E_state(a, cc.curve, 0.01, cc.ybase + yb);
      g_worst_h = std::max(g_worst_h, std::abs(hamiltonian(a, s) - 0.5));
    }
    *d = "sup err " + sci(sup);
    return sup <= 1e-6;
  });

  add(11, "normal-form suites Ga-Gb and Ta-Te", [](std::string* d) {
    Ars g = make_fchart_ars("x*exp(0.3*x*y)", kBox);
    ChartResult gc = run_procedure1(g, canonical_curve(g, {0.0, 0.2}), GridSpec{});
    ConditionReport gr = verify_conditions(gc);

    Ars t = make_fchart_ars("y - x^2*(1+x)", kBox);
    ChartResult tc = run_procedure1(t, canonical_curve(t, {0.0, 0.0}), GridSpec{});
    ConditionReport tr = verify_conditions(tc);

    std::ostringstream os;
    for (const ConditionReport* r : {&gr, &tr})
      for (const ConditionEntry& e : r->entries)
        os << e.name << (e.pass ? " ok " : " FAIL ");
    *d = os.str();
    return gr.pass && tr.pass;
  });

  add(12, "invariant unchanged by a pushforward diffeomorphism", [](std::string* d) {
    GridSpec grid;
    grid.nx = 5;
    grid.ny = 5;
    double worst = 0.0;
    for (const char* f : {"x+1", "x"}) {
      Ars base = make_fchart_ars(f, kBox);
      Ars moved = pushforward_ars(base, "x + 0.1*y^2", "y + 0.05*x*y");
      ChartResult cb = run_procedure1(base, canonical_curve(base, {0.0, 0.0}), grid);
      ChartResult cm = run_procedure1(moved, canonical_curve(moved, {0.0, 0.0}), grid);
      for (int i = 0; i < grid.cols(); ++i)
        for (int j = 0; j < grid.rows(); ++j)
          worst = std::max(worst, std::abs(cb.at(i, j) - cm.at(i, j)));
      for (const Ars* s : {&base, &moved}) {
        GeodesicState g = chart_map_E_state(*s, canonical_curve(*s, {0.0, 0.0}).curve, 0.005, 0.0);
        g_worst_h = std::max(g_worst_h, std::abs(hamiltonian(*s, g) - 0.5));
      }
    }
    *d = "sup gap " + sci(worst);
    return worst <= 1e-4;
  });

  add(13, "equal curvature grids, invariant grids apart by > 0.1", [](std::string* d) {
    Ars a = make_fchart_ars("x+1", kBox);
    Ars b = make_fchart_ars("1/(x+1)^2", kBox);
    double k_gap = 0.0;
    for (int i = 0; i < 41; ++i)
      for (int j = 0; j < 41; ++j) {
        Point2 q{-0.4 + 0.8 * i / 40.0, -0.4 + 0.8 * j / 40.0};
        k_gap = std::max(k_gap, std::abs(gauss_curvature(a, q) - gauss_curvature(b, q)));
      }
    GridSpec grid;
    grid.h = 1e-2;
    grid.x_offset = 0.3;
    grid.ny = 2;
    ChartResult ca = run_procedure1(a, canonical_curve(a, {0.0, 0.0}), grid);
    ChartResult cb = run_procedure1(b, canonical_curve(b, {0.0, 0.0}), grid);
    double f_gap = 0.0;
    for (int i = 0; i < grid.cols(); ++i)
      f_gap = std::max(f_gap, std::abs(ca.at(i, grid.ny) - cb.at(i, grid.ny)));
    std::ostringstream os;
    os << "K gap " << k_gap << ", f~ gap " << f_gap;
    *d = os.str();
    return k_gap <= 1e-9 && f_gap > 0.1;
  });

  add(14, "H stays within 1e-9 of 1/2 on every trajectory above", [](std::string* d) {
    *d = "max |H - 1/2| " + sci(g_worst_h);
    return g_worst_h <= 1e-9;
  });

  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("[%2d] %s  %s (%s)\n", c.id, ok ? "PASS" : "FAIL", c.what, detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
