#pragma once

#include "invex2d/expr.hpp"
#include "invex2d/vec2.hpp"

namespace invex2d {

/// Default absolute threshold on ‖∇g‖ below which LICQ is declared violated.
inline constexpr double kGradientTolerance = 1e-9;

/// u.x1·v.x2 − u.x2·v.x1.
constexpr double cross(Vec2 u, Vec2 v) { return u.x1 * v.x2 - u.x2 * v.x1; }

/// (−∂g/∂x2, ∂g/∂x1) from a gradient; no normalization.
constexpr Vec2 tangent_of_gradient(Vec2 grad) { return {-grad.x2, grad.x1}; }

/// Tangent to the curve g = 0 at y in the positive direction.
/// @throws PreconditionError when |g(y)| exceeds `on_curve_tol`.
/// @throws LicqError when ‖∇g(y)‖ < `gradient_tol`.
Vec2 tangent_vector(const Function& g, Point2 y,
                    double gradient_tol = kGradientTolerance,
                    double on_curve_tol = 1e-6);
Vec2 tangent_vector(const Expression& g, Point2 y,
                    double gradient_tol = kGradientTolerance,
                    double on_curve_tol = 1e-6);

/// ∇f(x)·u.
double directional_derivative(const Function& f, Point2 x, Vec2 u);
double directional_derivative(const Expression& f, Point2 x, Vec2 u);

}  // namespace invex2d
