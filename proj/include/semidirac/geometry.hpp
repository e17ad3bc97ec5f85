#pragma once

#include <cmath>
#include <stdexcept>

namespace semidirac {

/// Point / vector in the plane.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

  double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Axis-aligned rectangle [xmin,xmax] x [ymin,ymax].
struct Rect {
  double xmin, xmax, ymin, ymax;

  Rect(double x0, double x1, double y0, double y1)
      : xmin(x0), xmax(x1), ymin(y0), ymax(y1) {
    if (!(xmax > xmin) || !(ymax > ymin))
      throw std::invalid_argument("Rect: degenerate rectangle");
  }

  static Rect square(double half_width) {
    return Rect(-half_width, half_width, -half_width, half_width);
  }

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

}  // namespace semidirac
