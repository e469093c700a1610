#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ars {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

using Vec2 = Point2;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  return {a.x / n, a.y / n};
}
// 90-degree counterclockwise rotation.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

struct Box {
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;

  bool contains(Point2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  Point2 clamp(Point2 p) const {
    return {std::fmin(std::fmax(p.x, xmin), xmax),
            std::fmin(std::fmax(p.y, ymin), ymax)};
  }
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation left the domain of an elementary function (log/sqrt of a
// non-positive argument, division by zero).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace ars
