// Command-line front end: classification, tracing, flows, cut loci, model
// jets, and the Procedure-1 chart, with CSV/JSON/SVG emitters.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ars/classify.hpp"
#include "ars/curvature.hpp"
#include "ars/cutlocus.hpp"
#include "ars/elliptic.hpp"
#include "ars/frame.hpp"
#include "ars/geodesic.hpp"
#include "ars/io.hpp"
#include "ars/modeljets.hpp"
#include "ars/normalform.hpp"

using nlohmann::json;

namespace {

struct StructureOpts {
  std::string f;
  std::string a1, a2, b1, b2;
  std::vector<double> domain{-1.0, 1.0, -1.0, 1.0};
  int orientation_m = 1;
  int orientation_e = 1;
};

void add_structure_flags(CLI::App* sub, StructureOpts* s) {
  sub->add_option("--f", s->f, "chart function f(x,y) for the frame (1,0), (0,f)");
  sub->add_option("--a1", s->a1, "first component of F1");
  sub->add_option("--a2", s->a2, "second component of F1");
  sub->add_option("--b1", s->b1, "first component of F2");
  sub->add_option("--b2", s->b2, "second component of F2");
  sub->add_option("--domain", s->domain, "xmin,xmax,ymin,ymax")->delimiter(',')->expected(4);
  sub->add_option("--orientation-m", s->orientation_m, "chart orientation (+1/-1)");
  sub->add_option("--orientation-e", s->orientation_e, "bundle orientation (+1/-1)");
}

ars::Ars build_ars(const StructureOpts& s) {
  if (s.domain.size() != 4 || !(s.domain[0] < s.domain[1]) || !(s.domain[2] < s.domain[3]))
    throw CLI::ValidationError("--domain must be xmin,xmax,ymin,ymax with a nonempty box");
  ars::Box box{s.domain[0], s.domain[1], s.domain[2], s.domain[3]};
  if (!s.f.empty())
    return ars::make_fchart_ars(s.f, box, s.orientation_m, s.orientation_e);
  if (!s.a1.empty() && !s.a2.empty() && !s.b1.empty() && !s.b2.empty())
    return ars::make_frame_ars(s.a1, s.a2, s.b1, s.b2, box, s.orientation_m, s.orientation_e);
  throw CLI::ValidationError("provide either --f or all of --a1 --a2 --b1 --b2");
}

ars::Point2 as_point(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) throw CLI::ValidationError(std::string(flag) + " needs x,y");
  return {v[0], v[1]};
}

void emit_json(const json& j, const std::string& path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (path.empty() || path == "-") std::cout << text;
  else ars::write_text_file(path, text);
}

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  if (path.empty()) return;
  std::ostringstream os;
  ars::write_csv(os, header, rows);
  ars::write_text_file(path, os.str());
}

json witnesses_json(const ars::PointClass& pc) {
  return json{{"d0", pc.witnesses.d0},
              {"d1", pc.witnesses.d1},
              {"d2", pc.witnesses.d2},
              {"grad_k_norm", pc.witnesses.grad_k_norm},
              {"ha_degenerate", pc.witnesses.ha_degenerate}};
}

// Single-cell marching-squares segments of one level on the chart grid.
std::vector<ars::SvgPath> contour_paths(const ars::GridSpec& g,
                                        const std::vector<std::vector<double>>& v,
                                        const std::vector<double>& levels) {
  std::vector<ars::SvgPath> out;
  for (double L : levels) {
    for (int i = 0; i + 1 < g.cols(); ++i) {
      for (int j = 0; j + 1 < g.rows(); ++j) {
        struct Corner {
          double x, y, val;
        };
        Corner c[4] = {{g.xbar(i), g.ybar(j), v[i][j]},
                       {g.xbar(i + 1), g.ybar(j), v[i + 1][j]},
                       {g.xbar(i + 1), g.ybar(j + 1), v[i + 1][j + 1]},
                       {g.xbar(i), g.ybar(j + 1), v[i][j + 1]}};
        std::vector<ars::Point2> hits;
        for (int e = 0; e < 4; ++e) {
          const Corner& a = c[e];
          const Corner& b = c[(e + 1) % 4];
          if ((a.val - L) * (b.val - L) < 0.0) {
            double w = (L - a.val) / (b.val - a.val);
            hits.push_back({a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)});
          }
        }
        if (hits.size() == 2) out.push_back({{hits[0], hits[1]}, ars::svg_style_plain()});
      }
    }
  }
  return out;
}

json report_json(const ars::ConditionReport& rep) {
  json residuals = json::object(), passes = json::object();
  for (const auto& e : rep.entries) {
    residuals[e.name] = e.residual;
    passes[e.name] = e.pass;
  }
  return json{{"suite", rep.suite}, {"residuals", residuals}, {"pass", passes},
              {"pass_all", rep.pass}};
}

json chart_json(const ars::ChartResult& chart, const ars::ConditionReport& rep) {
  ars::Point2 base = chart.curve.at(chart.ybase);
  return json{{"base_point", {base.x, base.y}},
              {"kind", ars::to_string(chart.point_kind.kind)},
              {"grid", {{"h", chart.grid.h}, {"nx", chart.grid.nx}, {"ny", chart.grid.ny}}},
              {"f_tilde", chart.f_tilde},
              {"det_DE", chart.det_DE},
              {"report", report_json(rep)}};
}

std::vector<std::vector<double>> cut_rows(const ars::CutLocus& cut) {
  std::vector<std::vector<double>> rows;
  for (std::size_t b = 0; b < cut.branches.size(); ++b)
    for (const auto& cp : cut.branches[b])
      rows.push_back({static_cast<double>(b), cp.a, cp.a_bar, cp.t_cut, cp.p.x, cp.p.y,
                      cp.conj_margin});
  return rows;
}

// ---------------------------------------------------------------------------

struct CommonOut {
  std::string out;  // JSON destination, default stdout
  std::string csv;
  std::string svg;
};

void add_out_flags(CLI::App* sub, CommonOut* o, bool with_csv = true, bool with_svg = true) {
  sub->add_option("--out", o->out, "JSON output path (default: stdout)");
  if (with_csv) sub->add_option("--csv", o->csv, "CSV output path");
  if (with_svg) sub->add_option("--svg", o->svg, "SVG output path");
}

// A subcommand triggered both on the command line and through its config
// file section fires its callback once per trigger; run the action once.
std::function<void()> run_once(std::function<void()> f) {
  auto done = std::make_shared<bool>(false);
  return [done, f = std::move(f)]() {
    if (*done) return;
    *done = true;
    f();
  };
}

int run_app(int argc, char** argv) {
  CLI::App app{"planar almost-Riemannian structures: classification, flows, cut loci, "
               "and completely reduced normal forms"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file with [subcommand] sections");
  app.get_config_ptr()->check(CLI::ExistingFile);

  int threads = 0;
  app.add_option("--threads", threads, "worker count (fallback: ARS2_THREADS, then 1)");

  // ---- classify ----
  auto* c_sub = app.add_subcommand("classify", "point classification with bracket witnesses")->configurable();
  auto c_s = std::make_shared<StructureOpts>();
  auto c_point = std::make_shared<std::vector<double>>();
  auto c_out = std::make_shared<CommonOut>();
  add_structure_flags(c_sub, c_s.get());
  c_sub->add_option("--point", *c_point, "query point x,y")->delimiter(',')->required();
  add_out_flags(c_sub, c_out.get(), false, false);
  c_sub->callback(run_once([=]() {
    ars::Ars ars = build_ars(*c_s);
    ars::Point2 q = as_point(*c_point, "--point");
    ars::PointClass pc = ars::point_class(ars, q);
    emit_json(json{{"point", {q.x, q.y}},
                   {"kind", ars::to_string(pc.kind)},
                   {"witnesses", witnesses_json(pc)}},
              c_out->out);
  }));

  // ---- singular ----
  auto* z_sub = app.add_subcommand("singular", "trace the singular set and its tangency points")->configurable();
  auto z_s = std::make_shared<StructureOpts>();
  auto z_seed = std::make_shared<std::vector<double>>();
  auto z_out = std::make_shared<CommonOut>();
  add_structure_flags(z_sub, z_s.get());
  z_sub->add_option("--seed", *z_seed, "trace seed x,y")->delimiter(',')->required();
  add_out_flags(z_sub, z_out.get());
  z_sub->callback(run_once([=]() {
    ars::Ars ars = build_ars(*z_s);
    ars::Curve z = ars::trace_singular_set(ars, as_point(*z_seed, "--seed"));
    auto tang = ars::find_tangencies(ars, z);
    json jt = json::array();
    std::vector<ars::SvgMark> marks;
    for (const auto& p : tang) {
      std::string kind;
      try {
        kind = ars::to_string(ars::tangency_type(ars, p));
      } catch (const ars::Error& e) {
        kind = std::string("ambiguous: ") + e.what();
      }
      jt.push_back(json{{"point", {p.x, p.y}}, {"kind", kind}});
      marks.push_back({p, 0.008, "#b03030"});
    }
    emit_json(json{{"samples", z.samples.size()},
                   {"length", z.length()},
                   {"closed", z.closed},
                   {"tangencies", jt}},
              z_out->out);
    std::vector<std::vector<double>> rows;
    for (const auto& s : z.samples) rows.push_back({s.param, s.p.x, s.p.y});
    emit_csv(z_out->csv, {"param", "x", "y"}, rows);
    if (!z_out->svg.empty())
      ars::write_text_file(z_out->svg,
                           ars::svg_document(ars.domain,
                                             {{ars::curve_points(z), ars::svg_style_singular()}},
                                             marks));
  }));

  // ---- curvature-map ----
  auto* k_sub = app.add_subcommand("curvature-map", "Gaussian curvature on a grid")->configurable();
  auto k_s = std::make_shared<StructureOpts>();
  auto k_n = std::make_shared<std::vector<int>>(std::vector<int>{81, 81});
  auto k_out = std::make_shared<CommonOut>();
  add_structure_flags(k_sub, k_s.get());
  k_sub->add_option("--grid", *k_n, "nx,ny sample counts")->delimiter(',')->expected(2);
  add_out_flags(k_sub, k_out.get(), true, false);
  k_sub->callback(run_once([=, &threads]() {
    ars::Ars ars = build_ars(*k_s);
    int nx = (*k_n)[0], ny = (*k_n)[1];
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(nx) * ny);
    ars::parallel_for(rows.size(), ars::thread_count(threads), [&](std::size_t idx) {
      int i = static_cast<int>(idx) / ny, j = static_cast<int>(idx) % ny;
      double x = ars.domain.xmin + (ars.domain.xmax - ars.domain.xmin) * i / (nx - 1);
      double y = ars.domain.ymin + (ars.domain.ymax - ars.domain.ymin) * j / (ny - 1);
      double K = std::numeric_limits<double>::quiet_NaN();
      try {
        K = ars::gauss_curvature(ars, {x, y});
      } catch (const ars::Error&) {
      }
      rows[idx] = {x, y, K};
    });
    double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
    std::size_t finite = 0;
    for (const auto& r : rows)
      if (std::isfinite(r[2])) {
        kmin = std::min(kmin, r[2]);
        kmax = std::max(kmax, r[2]);
        ++finite;
      }
    emit_json(json{{"finite_samples", finite}, {"k_min", kmin}, {"k_max", kmax}}, k_out->out);
    emit_csv(k_out->csv, {"x", "y", "K"}, rows);
  }));

  // ---- spade ----
  auto* s_sub = app.add_subcommand("spade", "crest/valley indicator map and branch traces")->configurable();
  auto s_s = std::make_shared<StructureOpts>();
  auto s_n = std::make_shared<std::vector<int>>(std::vector<int>{81, 81});
  auto s_seed = std::make_shared<std::vector<double>>();
  auto s_out = std::make_shared<CommonOut>();
  add_structure_flags(s_sub, s_s.get());
  s_sub->add_option("--grid", *s_n, "nx,ny sample counts")->delimiter(',')->expected(2);
  s_sub->add_option("--seed", *s_seed, "optional trace seed x,y for one branch")->delimiter(',');
  add_out_flags(s_sub, s_out.get());
  s_sub->callback(run_once([=, &threads]() {
    ars::Ars ars = build_ars(*s_s);
    int nx = (*s_n)[0], ny = (*s_n)[1];
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(nx) * ny);
    ars::parallel_for(rows.size(), ars::thread_count(threads), [&](std::size_t idx) {
      int i = static_cast<int>(idx) / ny, j = static_cast<int>(idx) % ny;
      double x = ars.domain.xmin + (ars.domain.xmax - ars.domain.xmin) * i / (nx - 1);
      double y = ars.domain.ymin + (ars.domain.ymax - ars.domain.ymin) * j / (ny - 1);
      double raw = std::numeric_limits<double>::quiet_NaN(), des = raw;
      try {
        ars::SpadeValue sv = ars::spade_indicator(ars, {x, y});
        raw = sv.raw;
        des = sv.desing;
      } catch (const ars::Error&) {
      }
      rows[idx] = {x, y, raw, des};
    });
    json j{{"samples", rows.size()}};
    std::vector<ars::SvgPath> paths;
    if (s_seed->size() == 2) {
      ars::ScalarJetField sf = [&ars](ars::Point2 p, int n) {
        return ars::spade_raw_jet(ars, p, n);
      };
      ars::Curve branch = ars::trace_zero_set(sf, as_point(*s_seed, "--seed"), ars.domain);
      j["branch_samples"] = branch.samples.size();
      j["branch_length"] = branch.length();
      paths.push_back({ars::curve_points(branch), ars::svg_style_spade()});
    }
    emit_json(j, s_out->out);
    emit_csv(s_out->csv, {"x", "y", "spade_raw", "spade_desing"}, rows);
    if (!s_out->svg.empty())
      ars::write_text_file(s_out->svg, ars::svg_document(ars.domain, paths));
  }));

  // ---- geodesic ----
  auto* g_sub = app.add_subcommand("geodesic", "Hamiltonian geodesic flow")->configurable();
  auto g_s = std::make_shared<StructureOpts>();
  auto g_state = std::make_shared<std::vector<double>>();
  auto g_time = std::make_shared<double>(1.0);
  auto g_samples = std::make_shared<int>(200);
  auto g_out = std::make_shared<CommonOut>();
  add_structure_flags(g_sub, g_s.get());
  g_sub->add_option("--state", *g_state, "initial x,y,px,py")->delimiter(',')->required();
  g_sub->add_option("--time", *g_time, "integration time (may be negative)");
  g_sub->add_option("--samples", *g_samples, "CSV sample count");
  add_out_flags(g_sub, g_out.get(), true, false);
  g_sub->callback(run_once([=]() {
    ars::Ars ars = build_ars(*g_s);
    if (g_state->size() != 4) throw CLI::ValidationError("--state needs x,y,px,py");
    ars::GeodesicState s0{(*g_state)[0], (*g_state)[1], (*g_state)[2], (*g_state)[3]};
    ars::Geodesic geo = ars::flow_geodesic(ars, s0, *g_time);
    std::vector<std::vector<double>> rows;
    int n = std::max(2, *g_samples);
    for (int i = 0; i < n; ++i) {
      double t = *g_time * i / (n - 1);
      ars::GeodesicState s = geo.state_at(t);
      rows.push_back({t, s.x, s.y, s.px, s.py, ars::hamiltonian(ars, s)});
    }
    ars::GeodesicState sf = geo.final_state();
    emit_json(json{{"h_drift", geo.h_drift},
                   {"final", {sf.x, sf.y, sf.px, sf.py}},
                   {"accepted_steps", geo.sol.t.size() - 1}},
              g_out->out);
    emit_csv(g_out->csv, {"t", "x", "y", "px", "py", "H"}, rows);
  }));

  // ---- cutlocus ----
  auto* u_sub = app.add_subcommand("cutlocus", "cut locus of the singular set")->configurable();
  auto u_s = std::make_shared<StructureOpts>();
  auto u_seed = std::make_shared<std::vector<double>>();
  auto u_amin = std::make_shared<double>(-0.05);
  auto u_amax = std::make_shared<double>(0.05);
  auto u_na = std::make_shared<int>(101);
  auto u_tmax = std::make_shared<double>(0.2);
  auto u_side = std::make_shared<int>(1);
  auto u_fit = std::make_shared<std::string>("none");
  auto u_out = std::make_shared<CommonOut>();
  add_structure_flags(u_sub, u_s.get());
  u_sub->add_option("--seed", *u_seed, "singular-set trace seed x,y")->delimiter(',')->required();
  u_sub->add_option("--a-min", *u_amin, "fan parameter lower bound");
  u_sub->add_option("--a-max", *u_amax, "fan parameter upper bound");
  u_sub->add_option("--n-a", *u_na, "fan member count");
  u_sub->add_option("--t-max", *u_tmax, "front horizon");
  u_sub->add_option("--side", *u_side, "covector side (+1/-1)");
  u_sub->add_option("--fit", *u_fit, "asymptote fit: none|line|power|cusp");
  add_out_flags(u_sub, u_out.get());
  u_sub->callback(run_once([=]() {
    ars::Ars ars = build_ars(*u_s);
    ars::Curve z = ars::trace_singular_set(ars, as_point(*u_seed, "--seed"));
    ars::InitialFamily fam = ars::z_source_family(ars, z, *u_side);
    ars::Front front = ars::propagate_front(ars, fam, *u_amin, *u_amax, *u_na, *u_tmax, *u_side);
    ars::CutLocus cut = ars::cut_locus(ars, front, front);
    cut.source = "singular-set";

    json jb = json::array();
    for (const auto& br : cut.branches) {
      json item{{"points", br.size()}};
      if (*u_fit != "none" && br.size() >= 10) {
        ars::FitModel model = *u_fit == "line" ? ars::FitModel::LineThroughOrigin
                              : *u_fit == "power" ? ars::FitModel::PowerLaw
                                                  : ars::FitModel::CuspPair;
        try {
          json fits = json::array();
          for (const auto& f : ars::fit_asymptote(br, model))
            fits.push_back(json{{"coeff", f.coeff},
                                {"exponent", f.exponent},
                                {"max_rel_residual", f.max_rel_residual}});
          item["fit"] = fits;
        } catch (const ars::Error& e) {
          item["fit_error"] = e.what();
        }
      }
      jb.push_back(item);
    }
    emit_json(json{{"source", cut.source}, {"branches", jb}}, u_out->out);
    emit_csv(u_out->csv, {"branch", "a", "a_bar", "t_cut", "x", "y", "conj_margin"},
             cut_rows(cut));
    if (!u_out->svg.empty()) {
      std::vector<ars::SvgPath> paths{{ars::curve_points(z), ars::svg_style_singular()}};
      for (const auto& br : cut.branches) {
        std::vector<ars::Point2> pts;
        for (const auto& cp : br) pts.push_back(cp.p);
        paths.push_back({pts, ars::svg_style_cut()});
      }
      ars::write_text_file(u_out->svg, ars::svg_document(ars.domain, paths));
    }
  }));

  // ---- jets ----
  auto* j_sub = app.add_subcommand("jets", "rescaled model jets at a tangency")->configurable();
  auto j_gamma = std::make_shared<double>(1.0);
  auto j_out = std::make_shared<CommonOut>();
  j_sub->add_option("--gamma", *j_gamma, "model parameter gamma > 0");
  add_out_flags(j_sub, j_out.get(), false, false);
  j_sub->callback(run_once([=]() {
    if (*j_gamma <= 0.0) throw CLI::ValidationError("--gamma must be positive");
    ars::JetSolution js = ars::solve_model_jets(*j_gamma);
    emit_json(json{{"gamma", js.gamma},
                   {"K_agm", js.K},
                   {"s_bar", js.s_bar},
                   {"closed_form_max_err", js.closed_form_max_err},
                   {"py0_drift", js.py0_drift},
                   {"x10", js.x10_at},
                   {"y10", js.y10_at},
                   {"g1", js.g1_at},
                   {"g2", js.g2_at},
                   {"two_g1_plus_g2", js.two_g1_plus_g2},
                   {"two_g1_plus_g2_rk4", js.two_g1_plus_g2_rk4},
                   {"j0_min_abs", js.j0_min_abs},
                   {"j0_vanishes", js.j0_vanishes}},
              j_out->out);
  }));

  // ---- canon ----
  auto* n_sub = app.add_subcommand("canon", "canonical curve, Procedure-1 chart, and condition suite")->configurable();
  auto n_s = std::make_shared<StructureOpts>();
  auto n_point = std::make_shared<std::vector<double>>();
  auto n_h = std::make_shared<double>(1e-3);
  auto n_nx = std::make_shared<int>(10);
  auto n_ny = std::make_shared<int>(10);
  auto n_out = std::make_shared<CommonOut>();
  add_structure_flags(n_sub, n_s.get());
  n_sub->add_option("--point", *n_point, "base point x,y")->delimiter(',')->required();
  n_sub->add_option("--spacing", *n_h, "grid spacing");
  n_sub->add_option("--nx", *n_nx, "grid half-extent in xbar");
  n_sub->add_option("--ny", *n_ny, "grid half-extent in ybar");
  add_out_flags(n_sub, n_out.get());
  n_sub->callback(run_once([=]() {
    ars::Ars ars = build_ars(*n_s);
    ars::Point2 q = as_point(*n_point, "--point");
    ars::CanonicalCurve cc = ars::canonical_curve(ars, q);
    ars::GridSpec grid;
    grid.h = *n_h;
    grid.nx = *n_nx;
    grid.ny = *n_ny;
    ars::ChartResult chart = ars::run_procedure1(ars, cc, grid);
    ars::ConditionReport rep = ars::verify_conditions(chart);
    emit_json(chart_json(chart, rep), n_out->out);

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < grid.cols(); ++i)
      for (int j = 0; j < grid.rows(); ++j)
        rows.push_back({grid.xbar(i), grid.ybar(j), chart.f_tilde[i][j], chart.det_DE[i][j],
                        chart.E_points[i][j].x, chart.E_points[i][j].y});
    emit_csv(n_out->csv, {"xbar", "ybar", "f_tilde", "det_DE", "Ex", "Ey"}, rows);
    if (!n_out->svg.empty()) {
      double lo = chart.f_tilde[0][0], hi = lo;
      for (const auto& col : chart.f_tilde)
        for (double v : col) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      std::vector<double> levels;
      for (int k = 1; k <= 9; ++k) levels.push_back(lo + (hi - lo) * k / 10.0);
      double X = grid.nx * grid.h + std::abs(grid.x_offset);
      double Y = grid.ny * grid.h + std::abs(grid.y_offset);
      ars::Box view{-1.1 * X, 1.1 * X, -1.1 * Y, 1.1 * Y};
      ars::write_text_file(n_out->svg,
                           ars::svg_document(view, contour_paths(grid, chart.f_tilde, levels)));
    }
  }));

  // ---- repro ----
  auto* r_sub = app.add_subcommand("repro", "full pipeline for f = y - x^2(1+x)")->configurable();
  auto r_dir = std::make_shared<std::string>("repro_out");
  r_sub->add_option("--outdir", *r_dir, "artifact directory");
  r_sub->callback(run_once([=]() {
    std::filesystem::create_directories(*r_dir);
    auto path = [&](const char* name) { return *r_dir + "/" + name; };

    ars::Box box{-0.6, 0.6, -0.6, 0.6};
    ars::Ars ars = ars::make_fchart_ars("y - x^2*(1 + x)", box);
    json report;

    ars::PointClass pc = ars::point_class(ars, {0, 0});
    report["classify"] = {{"kind", ars::to_string(pc.kind)}, {"witnesses", witnesses_json(pc)}};

    ars::Curve z = ars::trace_singular_set(ars, {0.3, 0.12});
    auto tang = ars::find_tangencies(ars, z);
    report["singular"] = {{"samples", z.samples.size()}, {"tangencies", tang.size()}};

    ars::CanonicalCurve cc = ars::canonical_curve(ars, {0, 0});
    ars::ChartResult chart = ars::run_procedure1(ars, cc, {});
    ars::ConditionReport rep = ars::verify_conditions(chart);
    report["canon"] = report_json(rep);
    {
      // origin tangent of the crest branch, as dx/dy
      ars::Vec2 t = cc.curve.tangent_at(cc.ybase);
      report["spade_tangent_dx_dy"] = t.x / t.y;
    }

    ars::InitialFamily fam_up = ars::z_source_family(ars, z, +1);
    ars::Front up = ars::propagate_front(ars, fam_up, -0.06, 0.06, 161, 0.12, +1);
    ars::CutOptions upper_opts;
    upper_opts.window = [](double a) { return 3.0 * std::abs(a) + 0.02; };
    ars::CutLocus cut_up = ars::cut_locus(ars, up, up, upper_opts);
    cut_up.source = "singular-set upper";

    ars::InitialFamily fam_dn = ars::z_source_family(ars, z, -1);
    ars::Front dn = ars::propagate_front(ars, fam_dn, -0.05, 0.05, 121, 1.0, -1);
    double kell = ars::elliptic_K_agm();
    ars::CutOptions lower_opts;
    lower_opts.window = [kell](double a) {
      double eta = std::sqrt(std::abs(a));
      return eta * (2.0 * kell + 0.3) + 1e-3;
    };
    ars::CutLocus cut_dn = ars::cut_locus(ars, dn, dn, lower_opts);
    cut_dn.source = "singular-set lower";

    auto fit_report = [&](const ars::CutLocus& cut, ars::FitModel model) {
      json out = json::array();
      for (const auto& br : cut.branches) {
        json item{{"points", br.size()}};
        if (br.size() >= 10) {
          try {
            json fits = json::array();
            for (const auto& f : ars::fit_asymptote(br, model))
              fits.push_back(json{{"coeff", f.coeff}, {"exponent", f.exponent}});
            item["fit"] = fits;
          } catch (const ars::Error& e) {
            item["fit_error"] = e.what();
          }
        }
        out.push_back(item);
      }
      return out;
    };
    report["cut_upper"] = fit_report(cut_up, ars::FitModel::LineThroughOrigin);
    report["cut_lower"] = fit_report(cut_dn, ars::FitModel::CuspPair);

    emit_csv(path("cut_upper.csv"), {"branch", "a", "a_bar", "t_cut", "x", "y", "conj_margin"},
             cut_rows(cut_up));
    emit_csv(path("cut_lower.csv"), {"branch", "a", "a_bar", "t_cut", "x", "y", "conj_margin"},
             cut_rows(cut_dn));

    // combined figure: Z dotted, cut loci dashed, crest branch solid
    std::vector<ars::SvgPath> paths{{ars::curve_points(z), ars::svg_style_singular()},
                                    {ars::curve_points(cc.curve), ars::svg_style_spade()}};
    for (const auto* cut : {&cut_up, &cut_dn})
      for (const auto& br : cut->branches) {
        std::vector<ars::Point2> pts;
        for (const auto& cp : br) pts.push_back(cp.p);
        paths.push_back({pts, ars::svg_style_cut()});
      }
    std::vector<ars::SvgMark> marks;
    for (const auto& p : tang) marks.push_back({p, 0.008, "#b03030"});
    ars::write_text_file(path("figure.svg"),
                         ars::svg_document({-0.3, 0.3, -0.3, 0.3}, paths, marks));
    emit_json(report, path("report.json"));
    std::cout << "artifacts written to " << *r_dir << "\n";
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", e.what()}, {"kind", "config"}}.dump() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const ars::Error& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "module"}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "internal"}}.dump() << "\n";
    return 1;
  }
}
