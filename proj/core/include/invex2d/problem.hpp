#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "invex2d/expr.hpp"
#include "invex2d/vec2.hpp"

namespace invex2d {

/// Axis-aligned box [lo1, hi1] × [lo2, hi2].
struct Box2 {
  double lo1 = 0.0;
  double hi1 = 1.0;
  double lo2 = 0.0;
  double hi2 = 1.0;

  Point2 center() const { return {0.5 * (lo1 + hi1), 0.5 * (lo2 + hi2)}; }
  double width() const { return hi1 - lo1; }
  double height() const { return hi2 - lo2; }
  double diagonal() const { return std::hypot(width(), height()); }
  double perimeter() const { return 2.0 * (width() + height()); }
  bool contains(Point2 x, double tol = 0.0) const {
    return x.x1 >= lo1 - tol && x.x1 <= hi1 + tol && x.x2 >= lo2 - tol &&
           x.x2 <= hi2 + tol;
  }
  /// Box scaled by `factor` about its center.
  Box2 inflated(double factor) const;

  friend bool operator==(const Box2&, const Box2&) = default;
};

struct Tolerances {
  double feasibility = 1e-8;
  double active = 1e-6;
  double gradient = 1e-9;
};

/// A user constraint g(x) <= 0.
struct ConstraintSpec {
  std::string name;
  Expression expr;
  /// Skip nonconvexity sampling; the caller vouches for convexity.
  bool known_convex = false;
};

struct Constraint {
  std::string name;
  Expression expr;
  Function fn;
  bool known_convex = false;
  bool is_box_edge = false;
};

struct ConcavityReport {
  bool concave = true;
  double max_eigenvalue = 0.0;
  Point2 worst_point;
  int samples = 0;
};

/// Indices into Problem2D::constraints() with |g_i(x)| <= active tolerance.
struct ActiveSet {
  std::vector<std::size_t> indices;

  bool empty() const { return indices.empty(); }
  std::size_t size() const { return indices.size(); }
  bool contains(std::size_t i) const;
  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;
};

/// max f(x) s.t. g_i(x) <= 0, x in box.
///
/// The four box edges are appended after the user constraints as linear
/// constraints named lo1, hi1, lo2, hi2, so the rest of the library treats
/// them like any other constraint.
class Problem2D {
 public:
  /// @throws ModelError on a non-finite or empty box or duplicate names.
  Problem2D(Expression objective, std::vector<ConstraintSpec> constraints,
            Box2 box, Tolerances tolerances = {});

  const Expression& objective_expr() const { return objective_expr_; }
  const Function& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Constraint& constraint(std::size_t i) const { return constraints_[i]; }
  std::size_t user_constraint_count() const { return user_count_; }
  /// Index of a constraint by name, or npos.
  std::size_t find(std::string_view name) const;
  const Box2& box() const { return box_; }
  const Tolerances& tolerances() const { return tolerances_; }
  const ConcavityReport& concavity() const { return concavity_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Expression objective_expr_;
  Function objective_;
  std::vector<Constraint> constraints_;
  std::size_t user_count_ = 0;
  Box2 box_;
  Tolerances tolerances_;
  ConcavityReport concavity_;
  std::vector<std::string> warnings_;
};

/// Every g_i(x) <= tol (box edges included). Uses the problem's
/// feasibility tolerance unless one is given.
/// @throws DomainError propagated from evaluation.
bool is_feasible(const Problem2D& p, Point2 x);
bool is_feasible(const Problem2D& p, Point2 x, double tol);

/// Largest constraint value at x (negative inside F).
double max_constraint(const Problem2D& p, Point2 x);

ActiveSet active_set(const Problem2D& p, Point2 x);
ActiveSet active_set(const Problem2D& p, Point2 x, double tol);

/// Samples the Hessian of f on a samples×samples grid over the box.
ConcavityReport validate_concavity(const Expression& f, const Box2& box,
                                   int samples = 50);

/// Parses a problem file (see README for the format).
/// @throws ParseError, ModelError.
Problem2D load_problem(std::string_view document);

/// Writes a problem file that load_problem reads back to an equal problem.
std::string format_problem(const Problem2D& p);

}  // namespace invex2d
