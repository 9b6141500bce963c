#include "invex2d/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "invex2d/error.hpp"

namespace invex2d {

Box2 Box2::inflated(double factor) const {
  const Point2 c = center();
  const double hw = 0.5 * width() * factor;
  const double hh = 0.5 * height() * factor;
  return {c.x1 - hw, c.x1 + hw, c.x2 - hh, c.x2 + hh};
}

bool ActiveSet::contains(std::size_t i) const {
  return std::find(indices.begin(), indices.end(), i) != indices.end();
}

Problem2D::Problem2D(Expression objective,
                     std::vector<ConstraintSpec> constraints, Box2 box,
                     Tolerances tolerances)
    : objective_expr_(std::move(objective)),
      objective_(objective_expr_),
      user_count_(constraints.size()),
      box_(box),
      tolerances_(tolerances) {
  const bool finite = std::isfinite(box.lo1) && std::isfinite(box.hi1) &&
                      std::isfinite(box.lo2) && std::isfinite(box.hi2);
  if (!finite) throw ModelError("unbounded problem: box must be finite");
  if (!(box.lo1 < box.hi1) || !(box.lo2 < box.hi2)) {
    throw ModelError("empty box: require lo < hi for both variables");
  }

  std::set<std::string> names;
  for (auto& spec : constraints) {
    if (spec.name.empty()) throw ModelError("constraint without a name");
    if (!names.insert(spec.name).second) {
      throw ModelError("duplicate constraint name '" + spec.name + "'");
    }
  }
  const Expression edges[4] = {
      box.lo1 - x1(),
      x1() - box.hi1,
      box.lo2 - x2(),
      x2() - box.hi2,
  };
  const char* edge_names[4] = {"lo1", "hi1", "lo2", "hi2"};
  for (int k = 0; k < 4; ++k) {
    if (!names.insert(edge_names[k]).second) {
      throw ModelError(std::string("constraint name '") + edge_names[k] +
                       "' is reserved for the box");
    }
  }

  constraints_.reserve(constraints.size() + 4);
  for (auto& spec : constraints) {
    Constraint c;
    c.name = std::move(spec.name);
    c.expr = std::move(spec.expr);
    c.fn = Function(c.expr);
    c.known_convex = spec.known_convex;
    constraints_.push_back(std::move(c));
  }
  for (int k = 0; k < 4; ++k) {
    Constraint c;
    c.name = edge_names[k];
    c.expr = edges[k];
    c.fn = Function(c.expr);
    c.known_convex = true;
    c.is_box_edge = true;
    constraints_.push_back(std::move(c));
  }

  concavity_ = validate_concavity(objective_expr_, box_, 50);
  if (!concavity_.concave) {
    warnings_.push_back("objective is not concave over the box (max Hessian "
                        "eigenvalue " +
                        std::to_string(concavity_.max_eigenvalue) + ")");
  }
}

std::size_t Problem2D::find(std::string_view name) const {
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (constraints_[i].name == name) return i;
  }
  return npos;
}

bool is_feasible(const Problem2D& p, Point2 x, double tol) {
  for (const auto& c : p.constraints()) {
    if (!(c.fn.value(x) <= tol)) return false;
  }
  return true;
}

bool is_feasible(const Problem2D& p, Point2 x) {
  return is_feasible(p, x, p.tolerances().feasibility);
}

double max_constraint(const Problem2D& p, Point2 x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& c : p.constraints()) m = std::max(m, c.fn.value(x));
  return m;
}

ActiveSet active_set(const Problem2D& p, Point2 x, double tol) {
  ActiveSet s;
  for (std::size_t i = 0; i < p.constraints().size(); ++i) {
    if (std::fabs(p.constraints()[i].fn.value(x)) <= tol) {
      s.indices.push_back(i);
    }
  }
  return s;
}

ActiveSet active_set(const Problem2D& p, Point2 x) {
  return active_set(p, x, p.tolerances().active);
}

ConcavityReport validate_concavity(const Expression& f, const Box2& box,
                                   int samples) {
  if (samples < 1) throw PreconditionError("samples must be >= 1");
  const Function fn(f);
  ConcavityReport r;
  r.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 0.5 : double(i) / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double t = samples == 1 ? 0.5 : double(j) / (samples - 1);
      const Point2 x{box.lo1 + s * box.width(), box.lo2 + t * box.height()};
      double lam;
      try {
        lam = fn.hessian(x).max_eigenvalue();
      } catch (const DomainError&) {
        continue;
      }
      ++r.samples;
      if (lam > r.max_eigenvalue) {
        r.max_eigenvalue = lam;
        r.worst_point = x;
      }
    }
  }
  r.concave = r.max_eigenvalue <= 1e-8;
  return r;
}

}  // namespace invex2d
