#include "ars/cutlocus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace ars {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point2 z_point_fchart(const Ars& ars, const Curve& z, double a) {
  const FieldExpr& f = ars.fchart();
  // start from the traced sample with the closest x-coordinate
  double y = z.samples.front().p.y;
  double best = std::abs(z.samples.front().p.x - a);
  for (const auto& cs : z.samples) {
    double d = std::abs(cs.p.x - a);
    if (d < best) {
      best = d;
      y = cs.p.y;
    }
  }
  for (int it = 0; it < 60; ++it) {
    Jet2 j = f.jet({a, y}, 1);
    double fy = j.coeff(0, 1);
    if (fy == 0.0) throw Error("singular curve is vertical at the requested parameter");
    double step = j.value() / fy;
    y -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(y))) break;
  }
  return {a, y};
}

}  // namespace

InitialFamily z_source_family(const Ars& ars, const Curve& z, int side) {
  if (ars.chart_form) {
    Ars a_copy = ars;
    Curve z_copy = z;
    return [a_copy, z_copy, side](double a) {
      Point2 p = z_point_fchart(a_copy, z_copy, a);
      Jet2 j = a_copy.fchart().jet(p, 1);
      Vec2 tangent{-j.coeff(0, 1), j.coeff(1, 0)};  // canonical (-f_y, f_x)
      return transversal_covector(a_copy, p, tangent, side);
    };
  }
  Ars a_copy = ars;
  Curve z_copy = z;
  return [a_copy, z_copy, side](double a) {
    Point2 p = z_copy.at(a);
    return transversal_covector(a_copy, p, z_copy.tangent_at(a), side);
  };
}

InitialFamily point_source_family(const Ars& ars, Point2 q) {
  FrameJets fj = ars.jets(q, 0);
  double a1 = fj.a1.value(), a2 = fj.a2.value();
  double b1 = fj.b1.value(), b2 = fj.b2.value();
  double det = a1 * b2 - a2 * b1;
  if (det == 0.0) throw Error("point source lies on the singular set");
  Point2 q0 = q;
  return [=](double theta) {
    // p.F1 = cos(theta), p.F2 = sin(theta) gives H = 1/2
    double c = std::cos(theta), s = std::sin(theta);
    double px = (b2 * c - a2 * s) / det;
    double py = (-b1 * c + a1 * s) / det;
    return GeodesicState{q0.x, q0.y, px, py};
  };
}

Front propagate_front(const Ars& ars, const InitialFamily& family, double a_min,
                      double a_max, int n_a, double t_max, int side, FlowOptions flow) {
  if (n_a < 2) throw Error("need at least two fan members");
  Front fr;
  fr.family = family;
  fr.t_max = t_max;
  fr.side = side;
  fr.members.reserve(n_a);
  for (int i = 0; i < n_a; ++i) {
    FrontMember m;
    m.a = a_min + (a_max - a_min) * i / (n_a - 1);
    try {
      m.s0 = family(m.a);
      m.geo = flow_geodesic(ars, m.s0, t_max, flow);
      m.ok = true;
    } catch (const Error& e) {
      m.ok = false;
      m.error = e.what();
    }
    fr.members.push_back(std::move(m));
  }
  return fr;
}

namespace {

struct ConjCache {
  std::vector<bool> done;
  std::vector<double> t_conj;
};

double conjugate_time(const Ars& ars, const Front& fr, std::size_t i, double horizon,
                      ConjCache& cache) {
  if (cache.done.empty()) {
    cache.done.assign(fr.members.size(), false);
    cache.t_conj.assign(fr.members.size(), kInf);
  }
  if (cache.done[i]) return cache.t_conj[i];
  cache.done[i] = true;
  const FrontMember& m = fr.members[i];
  double da = 1e-7 + 1e-4 * std::abs(m.a);
  try {
    GeodesicState sp = fr.family(m.a + da);
    GeodesicState sm = fr.family(m.a - da);
    std::array<double, 4> seed{(sp.x - sm.x) / (2 * da), (sp.y - sm.y) / (2 * da),
                               (sp.px - sm.px) / (2 * da), (sp.py - sm.py) / (2 * da)};
    VariationalFrame vf = variational_flow(ars, m.s0, seed, horizon);
    if (vf.has_conjugate) cache.t_conj[i] = vf.first_conjugate_time;
  } catch (const Error&) {
    // leave the bound open rather than discard the member
  }
  return cache.t_conj[i];
}

double conjugate_time_at(const Ars& ars, const InitialFamily& family, double a,
                         double horizon) {
  double da = 1e-7 + 1e-4 * std::abs(a);
  try {
    GeodesicState sp = family(a + da);
    GeodesicState sm = family(a - da);
    std::array<double, 4> seed{(sp.x - sm.x) / (2 * da), (sp.y - sm.y) / (2 * da),
                               (sp.px - sm.px) / (2 * da), (sp.py - sm.py) / (2 * da)};
    VariationalFrame vf = variational_flow(ars, family(a), seed, horizon);
    if (vf.has_conjugate) return vf.first_conjugate_time;
  } catch (const Error&) {
  }
  return kInf;
}

}  // namespace

CutLocus cut_locus(const Ars& ars, const Front& fa, const Front& fb, CutOptions opts) {
  auto window = [&](const Front& fr, double a) {
    double w = fr.t_max;
    if (opts.window) w = std::min(w, opts.window(a));
    return w;
  };

  // Near-misses below the acceptance radius are common well before the true
  // crossing, so each member keeps a short list of candidate partners and the
  // Newton stage tries them in time order.
  struct Candidate {
    double t = 0.0;
    std::size_t j = 0;
  };
  std::vector<std::vector<Candidate>> cand(fa.members.size());

  auto local_spacing = [](const Front& fr, std::size_t i) {
    double s = 0.0;
    if (i > 0) s = std::max(s, std::abs(fr.members[i].a - fr.members[i - 1].a));
    if (i + 1 < fr.members.size())
      s = std::max(s, std::abs(fr.members[i + 1].a - fr.members[i].a));
    return s;
  };
  auto trivial_pair = [&](std::size_t i, double b_param, std::size_t j) {
    if (!opts.same_family) return false;
    double gap = opts.gap_factor * std::max(local_spacing(fa, i), local_spacing(fb, j));
    return std::abs(b_param - fa.members[i].a) <= gap;
  };

  // per-slice spatial hash over both fronts
  for (int k = 1; k <= opts.n_t; ++k) {
    double t = fa.t_max * k / opts.n_t;
    std::vector<std::pair<std::size_t, Point2>> pa, pb;
    for (std::size_t i = 0; i < fa.members.size(); ++i) {
      if (!fa.members[i].ok || cand[i].size() >= 12) continue;
      if (t > window(fa, fa.members[i].a)) continue;
      pa.emplace_back(i, fa.members[i].geo.state_at(t).pos());
    }
    for (std::size_t j = 0; j < fb.members.size(); ++j) {
      if (!fb.members[j].ok) continue;
      if (t > window(fb, fb.members[j].a)) continue;
      pb.emplace_back(j, fb.members[j].geo.state_at(t).pos());
    }
    if (pa.empty() || pb.empty()) continue;

    double spacing = 0.0;
    for (std::size_t i = 1; i < pa.size(); ++i)
      spacing = std::max(spacing, norm(pa[i].second - pa[i - 1].second));
    for (std::size_t j = 1; j < pb.size(); ++j)
      spacing = std::max(spacing, norm(pb[j].second - pb[j - 1].second));
    double cell = std::max(opts.cell_factor * spacing, 1e-12);

    auto key = [cell](Point2 p) {
      long long kx = static_cast<long long>(std::floor(p.x / cell));
      long long ky = static_cast<long long>(std::floor(p.y / cell));
      return (kx << 32) ^ (ky & 0xffffffffLL);
    };
    std::unordered_map<long long, std::vector<std::size_t>> hash;
    for (std::size_t j = 0; j < pb.size(); ++j) hash[key(pb[j].second)].push_back(j);

    // spatial spacing to the fan neighbors at this slice: a pair only counts
    // as a crossing candidate once it is closer than that, otherwise every
    // member would pair with a member a few fan steps away at the very first
    // slice
    auto slice_spacing = [](const std::vector<std::pair<std::size_t, Point2>>& v,
                            std::size_t idx) {
      double s = 0.0;
      if (idx > 0) s = std::max(s, norm(v[idx].second - v[idx - 1].second));
      if (idx + 1 < v.size()) s = std::max(s, norm(v[idx + 1].second - v[idx].second));
      return s;
    };

    for (std::size_t ia = 0; ia < pa.size(); ++ia) {
      std::size_t i = pa[ia].first;
      Point2 p = pa[ia].second;
      double best_d = kInf;
      std::size_t best_j = 0;
      bool found = false;
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          Point2 shifted{p.x + dx * cell, p.y + dy * cell};
          auto it = hash.find(key(shifted));
          if (it == hash.end()) continue;
          for (std::size_t jj : it->second) {
            if (trivial_pair(i, fb.members[pb[jj].first].a, pb[jj].first)) continue;
            double d = norm(pb[jj].second - p);
            double accept = 0.9 * std::max(slice_spacing(pa, ia), slice_spacing(pb, jj));
            if (d < accept && d < best_d) {
              best_d = d;
              best_j = pb[jj].first;
              found = true;
            }
          }
        }
      }
      if (found) {
        // one candidate per partner region of the fan
        bool dup = false;
        for (const auto& c : cand[i])
          if (std::abs(fb.members[c.j].a - fb.members[best_j].a) <=
              2.0 * local_spacing(fb, best_j))
            dup = true;
        if (!dup) cand[i].push_back({t, best_j});
      }
    }
  }

  ConjCache conj_a, conj_b;
  std::map<int, std::vector<CutPoint>> by_sign;

  for (std::size_t i = 0; i < fa.members.size(); ++i) {
    const FrontMember& ma = fa.members[i];
    double wa = window(fa, ma.a);

    bool ok = false;
    Point2 meet{};
    double t = 0.0, b = 0.0;
    std::size_t j_used = 0;
    for (const Candidate& c : cand[i]) {
      if (ok) break;
      t = c.t;
      b = fb.members[c.j].a;
      j_used = c.j;
      for (int it = 0; it < 40; ++it) {
        Geodesic gb;
        double db = 1e-6 * std::max(1.0, std::abs(b));
        Geodesic gp, gm;
        try {
          gb = flow_geodesic(ars, fb.family(b), fb.t_max);
          gp = flow_geodesic(ars, fb.family(b + db), fb.t_max);
          gm = flow_geodesic(ars, fb.family(b - db), fb.t_max);
        } catch (const Error&) {
          break;
        }
        GeodesicState sa = ma.geo.state_at(t);
        GeodesicState sb = gb.state_at(t);
        double rx = sa.x - sb.x, ry = sa.y - sb.y;

        auto va = hamiltonian_rhs(ars, sa);
        auto vb = hamiltonian_rhs(ars, sb);
        GeodesicState sp = gp.state_at(t), sm = gm.state_at(t);
        double dxdb = (sp.x - sm.x) / (2 * db);
        double dydb = (sp.y - sm.y) / (2 * db);

        double j11 = va[0] - vb[0], j12 = -dxdb;
        double j21 = va[1] - vb[1], j22 = -dydb;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        double dt = (j22 * rx - j12 * ry) / det;
        double dbv = (-j21 * rx + j11 * ry) / det;
        t -= dt;
        b -= dbv;
        if (t <= 0.0 || t > 1.5 * wa) break;
        if (std::abs(rx) + std::abs(ry) < opts.newton_tol &&
            std::abs(dt) + std::abs(dbv) < 1e-12 * std::max(1.0, std::abs(t))) {
          meet = {0.5 * (sa.x + sb.x), 0.5 * (sa.y + sb.y)};
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      if (t > wa || t > window(fb, b) || trivial_pair(i, b, j_used)) ok = false;
    }
    if (!ok) continue;

    double margin = kInf;
    if (opts.conjugate_check) {
      double tca = conjugate_time(ars, fa, i, wa, conj_a);
      // the partner parameter b lands between fan members, so its conjugate
      // time is computed exactly rather than read from the member cache
      double tcb = conjugate_time_at(ars, fb.family, b, 1.25 * t);
      margin = std::min(tca, tcb) - t;
      if (margin <= 0.0) continue;  // past a conjugate point: not a cut point
    }

    CutPoint cp;
    cp.a = ma.a;
    cp.a_bar = b;
    cp.t_cut = t;
    cp.p = meet;
    cp.conj_margin = margin;
    int sgn = ars.det(meet) >= 0.0 ? +1 : -1;
    by_sign[sgn].push_back(cp);
  }

  CutLocus cl;
  for (auto& [sgn, pts] : by_sign) {
    std::sort(pts.begin(), pts.end(),
              [](const CutPoint& u, const CutPoint& v) { return std::abs(u.a) < std::abs(v.a); });
    cl.branches.push_back(std::move(pts));
  }
  return cl;
}

std::vector<FitResult> fit_asymptote(const std::vector<CutPoint>& branch, FitModel model) {
  if (branch.size() < 10) throw Error("too few branch points for a fit");

  auto line_fit = [](const std::vector<Point2>& pts) {
    double sxy = 0.0, syy = 0.0;
    for (const auto& p : pts) {
      sxy += p.x * p.y;
      syy += p.y * p.y;
    }
    if (syy == 0.0) throw Error("degenerate branch for a line fit");
    FitResult r;
    r.coeff = sxy / syy;
    r.exponent = 1.0;
    for (const auto& p : pts) {
      double fit = r.coeff * p.y;
      double scale = std::max(std::abs(p.x), std::abs(fit));
      if (scale > 0.0) r.max_rel_residual = std::max(r.max_rel_residual, std::abs(p.x - fit) / scale);
    }
    return r;
  };

  auto power_fit = [](const std::vector<Point2>& pts) {
    double ymin = kInf, ymax = 0.0;
    for (const auto& p : pts) {
      double ay = std::abs(p.y);
      if (ay == 0.0 || p.x == 0.0) continue;
      ymin = std::min(ymin, ay);
      ymax = std::max(ymax, ay);
    }
    if (!(ymax >= 10.0 * ymin)) throw Error("branch spans less than one decade in |y|");
    double su = 0, sv = 0, suu = 0, suv = 0;
    int n = 0;
    for (const auto& p : pts) {
      if (p.y == 0.0 || p.x == 0.0) continue;
      double u = std::log(std::abs(p.y)), v = std::log(std::abs(p.x));
      su += u;
      sv += v;
      suu += u * u;
      suv += u * v;
      ++n;
    }
    double den = n * suu - su * su;
    if (den == 0.0) throw Error("degenerate branch for a power-law fit");
    FitResult r;
    r.exponent = (n * suv - su * sv) / den;
    r.coeff = std::exp((sv - r.exponent * su) / n);
    for (const auto& p : pts) {
      if (p.y == 0.0 || p.x == 0.0) continue;
      double fit = r.coeff * std::pow(std::abs(p.y), r.exponent);
      r.max_rel_residual = std::max(r.max_rel_residual, std::abs(std::abs(p.x) - fit) / fit);
    }
    return r;
  };

  std::vector<Point2> pts;
  pts.reserve(branch.size());
  for (const auto& cp : branch) pts.push_back(cp.p);

  switch (model) {
    case FitModel::LineThroughOrigin: return {line_fit(pts)};
    case FitModel::PowerLaw: return {power_fit(pts)};
    case FitModel::CuspPair: {
      std::vector<Point2> pos, neg;
      for (const auto& p : pts) (p.x >= 0.0 ? pos : neg).push_back(p);
      std::vector<FitResult> out;
      if (pos.size() >= 10) out.push_back(power_fit(pos));
      if (neg.size() >= 10) out.push_back(power_fit(neg));
      if (out.empty()) throw Error("cusp fit needs at least ten points per side");
      return out;
    }
  }
  throw Error("unknown fit model");
}

}  // namespace ars
