#include "invex2d/geometry.hpp"

#include <cmath>
#include <string>

#include "invex2d/error.hpp"

namespace invex2d {

Vec2 tangent_vector(const Function& g, Point2 y, double gradient_tol,
                    double on_curve_tol) {
  const double gy = g.value(y);
  if (std::fabs(gy) > on_curve_tol) {
    throw PreconditionError("point is not on the curve g = 0 (g = " +
                            std::to_string(gy) + ")");
  }
  const Vec2 grad = g.gradient(y);
  if (norm(grad) < gradient_tol) {
    throw LicqError("degenerate constraint gradient");
  }
  return tangent_of_gradient(grad);
}

Vec2 tangent_vector(const Expression& g, Point2 y, double gradient_tol,
                    double on_curve_tol) {
  return tangent_vector(Function(g), y, gradient_tol, on_curve_tol);
}

double directional_derivative(const Function& f, Point2 x, Vec2 u) {
  return dot(f.gradient(x), u);
}

double directional_derivative(const Expression& f, Point2 x, Vec2 u) {
  return directional_derivative(Function(f), x, u);
}

}  // namespace invex2d
