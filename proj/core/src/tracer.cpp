#include "ars/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ars {

std::size_t Curve::nearest(Point2 q) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double d = norm(samples[i].p - q);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

namespace {

// Cubic Hermite over one segment; endpoint derivatives are the stored unit
// tangents rescaled by the chord speed |dp|/|dparam|.
struct Hermite {
  Point2 p0, p1;
  Vec2 d0, d1;
  double u0, du;

  Point2 value(double s) const {
    double t = (s - u0) / du;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return {h00 * p0.x + du * h10 * d0.x + h01 * p1.x + du * h11 * d1.x,
            h00 * p0.y + du * h10 * d0.y + h01 * p1.y + du * h11 * d1.y};
  }
  Vec2 derivative(double s) const {
    double t = (s - u0) / du;
    double t2 = t * t;
    double g00 = (6 * t2 - 6 * t) / du, g10 = 3 * t2 - 4 * t + 1;
    double g01 = (-6 * t2 + 6 * t) / du, g11 = 3 * t2 - 2 * t;
    return {g00 * p0.x + g10 * d0.x + g01 * p1.x + g11 * d1.x,
            g00 * p0.y + g10 * d0.y + g01 * p1.y + g11 * d1.y};
  }
};

// Second-order speed |dp/dparam| at a node: chord speeds of the adjacent
// segments combined over the spanning parameter interval.  The per-segment
// chord speed alone is only midpoint-accurate, which matters for curves with
// a non-arclength parameter.
double node_speed(const std::vector<CurveSample>& samples, std::size_t i) {
  double lp = 0.0, dp = 0.0, ln = 0.0, dn = 0.0;
  if (i > 0) {
    lp = norm(samples[i].p - samples[i - 1].p);
    dp = samples[i].param - samples[i - 1].param;
  }
  if (i + 1 < samples.size()) {
    ln = norm(samples[i + 1].p - samples[i].p);
    dn = samples[i + 1].param - samples[i].param;
  }
  if (dp == 0.0 && dn == 0.0) return 1.0;
  if (dp == 0.0) return ln / dn;
  if (dn == 0.0) return lp / dp;
  // nonuniform 3-point derivative of chord length vs parameter
  return (ln / dn) * (dp / (dp + dn)) + (lp / dp) * (dn / (dp + dn));
}

Hermite segment_at(const std::vector<CurveSample>& samples, double s) {
  auto it = std::lower_bound(samples.begin(), samples.end(), s,
                             [](const CurveSample& cs, double v) { return cs.param < v; });
  if (it == samples.begin()) ++it;
  if (it == samples.end()) --it;
  std::size_t ia = static_cast<std::size_t>(it - samples.begin()) - 1;
  const CurveSample& a = samples[ia];
  const CurveSample& b = samples[ia + 1];
  double du = b.param - a.param;
  return {a.p, b.p, node_speed(samples, ia) * a.tangent,
          node_speed(samples, ia + 1) * b.tangent, a.param, du};
}

}  // namespace

Point2 Curve::at(double s) const {
  if (samples.empty()) throw Error("empty curve");
  if (samples.size() == 1) return samples.front().p;
  s = std::clamp(s, samples.front().param, samples.back().param);
  return segment_at(samples, s).value(s);
}

Vec2 Curve::tangent_at(double s) const {
  if (samples.empty()) throw Error("empty curve");
  if (samples.size() == 1) return samples.front().tangent;
  s = std::clamp(s, samples.front().param, samples.back().param);
  Vec2 d = segment_at(samples, s).derivative(s);
  return norm(d) == 0.0 ? segment_at(samples, s).d0 : normalized(d);
}

void Curve::reverse() {
  std::reverse(samples.begin(), samples.end());
  double total = samples.empty() ? 0.0 : samples.front().param;
  for (auto& s : samples) {
    s.param = total - s.param;
    s.tangent = -1.0 * s.tangent;
  }
  for (auto& m : markers) m = samples.size() - 1 - m;
  std::sort(markers.begin(), markers.end());
}

bool project_to_zero(const ScalarJetField& field, Point2& q, double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    Jet2 j = field(q, 1);
    double v = j.value();
    if (std::abs(v) <= tol) return true;
    Vec2 g{j.coeff(1, 0), j.coeff(0, 1)};
    double g2 = dot(g, g);
    if (g2 == 0.0) return false;
    Vec2 delta = (v / g2) * g;
    q = q - delta;
    if (norm(delta) <= 1e-13 * (1.0 + norm(q))) return true;
  }
  return std::abs(field(q, 0).value()) <= tol;
}

namespace {

struct Probe {
  double value;
  Vec2 grad;
};

Probe probe(const ScalarJetField& field, Point2 q) {
  Jet2 j = field(q, 1);
  return {j.value(), {j.coeff(1, 0), j.coeff(0, 1)}};
}

// One predictor-corrector step of size h along direction sign.  Returns false
// when the corrector fails to converge at this step size.
bool step_once(const ScalarJetField& field, const TraceOptions& opts, Point2 q,
               Vec2 tangent, double h, Point2* out) {
  Point2 p = q + h * tangent;
  for (int it = 0; it < 12; ++it) {
    Probe pr = probe(field, p);
    if (std::abs(pr.value) <= opts.corrector_tol) {
      *out = p;
      return true;
    }
    double g2 = dot(pr.grad, pr.grad);
    if (g2 == 0.0) return false;
    Vec2 delta = (pr.value / g2) * pr.grad;
    // A corrector pulling back by more than half the step means the
    // predictor overshot the local curvature.
    if (norm(delta) > 0.5 * h && it == 0) return false;
    p = p - delta;
    // step-size convergence: residual tolerances are meaningless for fields
    // whose magnitude varies over many decades along the curve
    if (norm(delta) <= 1e-13 * (1.0 + norm(p))) {
      *out = p;
      return true;
    }
  }
  return false;
}

}  // namespace

Curve trace_zero_set(const ScalarJetField& field, Point2 seed, Box box, TraceOptions opts) {
  Point2 q0 = seed;
  if (!project_to_zero(field, q0, opts.corrector_tol))
    throw Error("seed does not converge onto the zero set");
  if (!box.contains(q0)) throw Error("projected seed is outside the trace box");

  Probe pr0 = probe(field, q0);
  if (norm(pr0.grad) <= opts.grad_tol)
    throw Error("field gradient vanishes at the seed");
  Vec2 t0 = normalized(perp(pr0.grad));

  auto run = [&](double sign, std::vector<CurveSample>* out, bool* hit_seed,
                 std::vector<std::size_t>* marks) {
    Point2 q = q0;
    Vec2 t = sign * t0;
    double h = opts.step_init;
    double s = 0.0;
    out->push_back({0.0, q, t});
    *hit_seed = false;
    while (static_cast<int>(out->size()) < opts.max_samples) {
      Point2 next;
      bool ok = false;
      while (h >= opts.step_min) {
        if (step_once(field, opts, q, t, h, &next)) {
          ok = true;
          break;
        }
        h *= 0.5;
      }
      if (!ok) {
        // underflow mid-trace: keep the partial curve, flag the end
        marks->push_back(out->size() - 1);
        break;
      }
      if (opts.stop && opts.stop(next)) {
        marks->push_back(out->size() - 1);
        break;
      }

      Probe pr = probe(field, next);
      double gn = norm(pr.grad);
      Vec2 tn;
      if (gn <= opts.grad_tol) {
        marks->push_back(out->size());
        out->push_back({s + norm(next - q), next, t});
        break;
      }
      tn = normalized(perp(pr.grad));
      if (dot(tn, t) < 0.0) tn = -1.0 * tn;

      double turn = std::acos(std::clamp(dot(tn, t), -1.0, 1.0));
      s += norm(next - q);
      out->push_back({s, next, tn});
      q = next;
      t = tn;

      if (turn > 0.2) h = std::max(opts.step_min, 0.5 * h);
      else if (turn < 0.02) h = std::min(opts.step_max, 1.4 * h);

      if (!box.contains(q)) break;
      if (out->size() > 10 && norm(q - q0) < h && dot(t, sign * t0) > 0.0) {
        *hit_seed = true;
        break;
      }
    }
  };

  Curve c;
  c.arclength = true;
  std::vector<CurveSample> fwd, bwd;
  std::vector<std::size_t> fwd_marks, bwd_marks;
  bool closed_fwd = false, closed_bwd = false;
  run(+1.0, &fwd, &closed_fwd, &fwd_marks);
  if (closed_fwd) {
    c.samples = std::move(fwd);
    c.markers = std::move(fwd_marks);
    c.closed = true;
    return c;
  }
  run(-1.0, &bwd, &closed_bwd, &bwd_marks);

  // Stitch: backward samples reversed (excluding the shared seed), then forward.
  c.samples.reserve(bwd.size() + fwd.size() - 1);
  double total = bwd.back().param;
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it)
    c.samples.push_back({total - it->param, it->p, -1.0 * it->tangent});
  for (std::size_t i = 1; i < fwd.size(); ++i)
    c.samples.push_back({total + fwd[i].param, fwd[i].p, fwd[i].tangent});
  for (auto m : bwd_marks) c.markers.push_back(bwd.size() - 1 - m);
  for (auto m : fwd_marks) c.markers.push_back(bwd.size() - 1 + m);
  std::sort(c.markers.begin(), c.markers.end());
  return c;
}

}  // namespace ars
