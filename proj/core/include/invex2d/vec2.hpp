#pragma once

#include <cmath>
#include <ostream>

namespace invex2d {

/// A vector (or point) in the (x1, x2) plane.
struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator/(Vec2 a, double s) {
    return {a.x1 / s, a.x2 / s};
  }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

  friend std::ostream& operator<<(std::ostream& os, Vec2 v) {
    return os << '(' << v.x1 << ", " << v.x2 << ')';
  }
};

using Point2 = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Vec2 a) {
  return std::isfinite(a.x1) && std::isfinite(a.x2);
}

/// Symmetric 2x2 matrix, used for Hessians.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  /// Quadratic form wᵀAw.
  constexpr double quad(Vec2 w) const {
    return a11 * w.x1 * w.x1 + 2.0 * a12 * w.x1 * w.x2 + a22 * w.x2 * w.x2;
  }
  constexpr Vec2 operator*(Vec2 w) const {
    return {a11 * w.x1 + a12 * w.x2, a12 * w.x1 + a22 * w.x2};
  }
  constexpr Sym2 operator+(const Sym2& o) const {
    return {a11 + o.a11, a12 + o.a12, a22 + o.a22};
  }
  friend constexpr Sym2 operator*(double s, const Sym2& m) {
    return {s * m.a11, s * m.a12, s * m.a22};
  }

  double min_eigenvalue() const {
    const double mean = 0.5 * (a11 + a22);
    return mean - std::hypot(0.5 * (a11 - a22), a12);
  }
  double max_eigenvalue() const {
    const double mean = 0.5 * (a11 + a22);
    return mean + std::hypot(0.5 * (a11 - a22), a12);
  }
};

}  // namespace invex2d
