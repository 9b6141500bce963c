#include "invex2d/neighborhood.hpp"

#include <cmath>
#include <numbers>

#include "invex2d/error.hpp"

namespace invex2d {

bool repair_feasibility(const Problem2D& p, Point2& y, double tol,
                        int max_iter) {
  const auto& cs = p.constraints();
  for (int it = 0; it <= max_iter; ++it) {
    std::size_t worst = cs.size();
    double worst_value = tol;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double v = cs[i].fn.value(y);
      if (!std::isfinite(v)) return false;
      if (v > worst_value) {
        worst_value = v;
        worst = i;
      }
    }
    if (worst == cs.size()) return true;
    if (it == max_iter) break;
    const Vec2 grad = cs[worst].fn.gradient(y);
    const double n2 = dot(grad, grad);
    if (n2 == 0.0) return false;
    y -= (worst_value / n2) * grad;
  }
  return false;
}

NeighborhoodResult sample_neighborhood(const Problem2D& p, Point2 x,
                                       const NeighborhoodOptions& opt) {
  NeighborhoodResult r;
  r.best_point = x;
  const double fx = p.objective().value(x);
  for (double radius : opt.radii) {
    for (int k = 0; k < opt.directions; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / opt.directions;
      Point2 y{x.x1 + radius * std::cos(angle),
               x.x2 + radius * std::sin(angle)};
      try {
        if (!repair_feasibility(p, y)) continue;
        if (distance(x, y) > 3.0 * radius) continue;
        const double gain = p.objective().value(y) - fx;
        ++r.feasible_samples;
        if (gain > r.best_improvement) {
          r.best_improvement = gain;
          r.best_point = y;
        }
      } catch (const DomainError&) {
        continue;
      }
    }
  }
  r.is_local_max = r.best_improvement <= opt.improvement_tol;
  return r;
}

}  // namespace invex2d
