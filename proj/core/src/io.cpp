#include "ars/io.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace ars {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

SvgStyle svg_style_singular() { return {"#000000", 0.004, "0.002 0.012"}; }
SvgStyle svg_style_cut() { return {"#b03030", 0.004, "0.02 0.012"}; }
SvgStyle svg_style_spade() { return {"#2050b0", 0.004, ""}; }
SvgStyle svg_style_plain(const std::string& stroke) { return {stroke, 0.003, ""}; }

std::string svg_document(Box view, const std::vector<SvgPath>& paths,
                         const std::vector<SvgMark>& marks, int width_px) {
  double w = view.xmax - view.xmin;
  double h = view.ymax - view.ymin;
  int height_px = static_cast<int>(width_px * h / w + 0.5);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\""
     << height_px << "\" viewBox=\"" << format_double(view.xmin) << " "
     << format_double(-view.ymax) << " " << format_double(w) << " " << format_double(h)
     << "\">\n";
  // flip y so the mathematical orientation is up
  os << "<g>\n";
  for (const auto& path : paths) {
    if (path.points.size() < 2) continue;
    os << "<polyline fill=\"none\" stroke=\"" << path.style.stroke << "\" stroke-width=\""
       << format_double(path.style.width) << "\"";
    if (!path.style.dash.empty()) os << " stroke-dasharray=\"" << path.style.dash << "\"";
    os << " points=\"";
    for (std::size_t i = 0; i < path.points.size(); ++i) {
      if (i) os << ' ';
      os << format_double(path.points[i].x) << ',' << format_double(-path.points[i].y);
    }
    os << "\"/>\n";
  }
  for (const auto& m : marks) {
    os << "<circle cx=\"" << format_double(m.p.x) << "\" cy=\"" << format_double(-m.p.y)
       << "\" r=\"" << format_double(m.radius) << "\" fill=\"" << m.fill << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::vector<Point2> curve_points(const Curve& c) {
  std::vector<Point2> out;
  out.reserve(c.samples.size());
  for (const auto& s : c.samples) out.push_back(s.p);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ARS2_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  pool.reserve(count);
  for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace ars
