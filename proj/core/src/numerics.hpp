#pragma once

#include <cmath>
#include <optional>

#include "invex2d/expr.hpp"
#include "invex2d/geometry.hpp"
#include "invex2d/vec2.hpp"

namespace invex2d::detail {

/// Solves [a b; c d] z = r. Empty when the matrix is (numerically) singular.
inline std::optional<Vec2> solve2(double a, double b, double c, double d,
                                  Vec2 r) {
  const double det = a * d - b * c;
  const double scale = std::fabs(a * d) + std::fabs(b * c);
  if (det == 0.0 || std::fabs(det) <= 1e-14 * scale) return std::nullopt;
  return Vec2{(r.x1 * d - b * r.x2) / det, (a * r.x2 - c * r.x1) / det};
}

/// Newton iteration on g(y + s·n) = 0 along a fixed unit direction n.
inline std::optional<Point2> project_along(const Function& g, Point2 y, Vec2 n,
                                           double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const double gy = g.value(y);
    if (std::fabs(gy) <= tol) return y;
    const double slope = dot(g.gradient(y), n);
    if (slope == 0.0 || !std::isfinite(slope)) return std::nullopt;
    y -= (gy / slope) * n;
    if (!is_finite(y)) return std::nullopt;
  }
  if (std::fabs(g.value(y)) <= tol) return y;
  return std::nullopt;
}

/// Newton iteration along the local gradient (shortest-step projection).
inline std::optional<Point2> project_gradient(const Function& g, Point2 y,
                                              double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const double gy = g.value(y);
    if (std::fabs(gy) <= tol) return y;
    const Vec2 grad = g.gradient(y);
    const double n2 = dot(grad, grad);
    if (n2 == 0.0 || !std::isfinite(n2)) return std::nullopt;
    y -= (gy / n2) * grad;
    if (!is_finite(y)) return std::nullopt;
  }
  if (std::fabs(g.value(y)) <= tol) return y;
  return std::nullopt;
}

/// 2D Newton on g_a = g_b = 0.
inline std::optional<Point2> polish_intersection(const Function& ga,
                                                 const Function& gb, Point2 y,
                                                 double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const double va = ga.value(y);
    const double vb = gb.value(y);
    if (std::fabs(va) <= tol && std::fabs(vb) <= tol) return y;
    const Vec2 da = ga.gradient(y);
    const Vec2 db = gb.gradient(y);
    auto step = solve2(da.x1, da.x2, db.x1, db.x2, {va, vb});
    if (!step) return std::nullopt;
    y -= *step;
    if (!is_finite(y)) return std::nullopt;
  }
  if (std::fabs(ga.value(y)) <= tol && std::fabs(gb.value(y)) <= tol) {
    return y;
  }
  return std::nullopt;
}

/// 2D Newton on g = 0, cross(∇f, ∇g) = 0: stationary points of f on the
/// curve g = 0.
inline std::optional<Point2> polish_stationary(const Function& f,
                                               const Function& g, Point2 y,
                                               double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const Vec2 df = f.gradient(y);
    const Vec2 dg = g.gradient(y);
    const Sym2 hf = f.hessian(y);
    const Sym2 hg = g.hessian(y);
    const double r1 = g.value(y);
    const double r2 = cross(df, dg);
    const double scale = norm(df) * norm(dg);
    if (std::fabs(r1) <= tol && std::fabs(r2) <= tol * std::fmax(1.0, scale)) {
      return y;
    }
    // ∂/∂x_k (f1 g2 − f2 g1)
    const double c1 =
        hf.a11 * dg.x2 + df.x1 * hg.a12 - hf.a12 * dg.x1 - df.x2 * hg.a11;
    const double c2 =
        hf.a12 * dg.x2 + df.x1 * hg.a22 - hf.a22 * dg.x1 - df.x2 * hg.a12;
    auto step = solve2(dg.x1, dg.x2, c1, c2, {r1, r2});
    if (!step) return std::nullopt;
    y -= *step;
    if (!is_finite(y)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace invex2d::detail
