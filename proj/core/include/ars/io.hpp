#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ars/tracer.hpp"
#include "ars/types.hpp"

namespace ars {

/// Number formatting used by every emitter: shortest round-trip decimal, so
/// repeated runs produce byte-identical files.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct SvgStyle {
  std::string stroke = "#000000";
  double width = 0.004;        // in view units
  std::string dash;            // SVG dasharray, empty = solid
};

/// Figure legend styles: singular set dotted, cut loci dashed, crest/valley
/// set solid.
SvgStyle svg_style_singular();
SvgStyle svg_style_cut();
SvgStyle svg_style_spade();
SvgStyle svg_style_plain(const std::string& stroke = "#606060");

struct SvgPath {
  std::vector<Point2> points;
  SvgStyle style;
};

struct SvgMark {
  Point2 p;
  double radius = 0.01;
  std::string fill = "#000000";
};

/// A complete standalone SVG document over the view box (y axis up).
std::string svg_document(Box view, const std::vector<SvgPath>& paths,
                         const std::vector<SvgMark>& marks = {}, int width_px = 720);

std::vector<Point2> curve_points(const Curve& c);

void write_text_file(const std::string& path, const std::string& content);

/// Effective worker count: `requested` if positive, else ARS2_THREADS, else 1.
int thread_count(int requested = 0);

/// Index-parallel loop with deterministic output slots; runs serially when
/// threads <= 1.  Exceptions in workers are rethrown on the caller.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace ars
