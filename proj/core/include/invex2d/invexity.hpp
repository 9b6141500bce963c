#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "invex2d/expr.hpp"
#include "invex2d/kkt.hpp"
#include "invex2d/level_curve.hpp"
#include "invex2d/problem.hpp"

namespace invex2d {

/// Stationary point of min f(x) s.t. g_i(x) = 0, with the multiplier
/// convention ∇f + λ∇g_i = 0.
struct AuxiliaryStationaryPoint {
  Point2 location;
  double lambda = 0.0;
  double f_value = 0.0;
  /// d²f/ds² along the unit-speed curve: t̂ᵀ(∇²f + λ∇²g_i)t̂.
  double curve_second_derivative = 0.0;
  double residual = 0.0;
  bool is_global_min_candidate = false;
  /// Representative of an arc on which f is constant.
  bool degenerate = false;
};

/// A point where the traced curve leaves the inflated box.
struct TruncationMarker {
  Point2 location;
  double f_value = 0.0;
};

struct AuxiliaryResult {
  std::size_t constraint = 0;
  bool curve_found = false;
  /// f is constant on a whole branch or arc of the curve.
  bool degenerate = false;
  /// The smallest f on the clipped curve sits at a truncation marker:
  /// the auxiliary problem is unbounded as far as the box can tell.
  bool unbounded_in_box = false;
  /// Global-min candidates attain the minimum at two or more separated
  /// points, or the curve is flat at the minimizer.
  bool minimum_not_strict = false;
  std::vector<AuxiliaryStationaryPoint> points;
  std::vector<TruncationMarker> truncations;
  std::vector<CurveBranch> branches;
  std::vector<std::string> notes;
};

/// Solves the auxiliary problem for constraint i by tracing g_i = 0 in the
/// box inflated ×1.05 and locating every stationary point of f along it.
AuxiliaryResult solve_aux_min(const Problem2D& p, std::size_t i);

/// Min Hessian eigenvalue of g_i sampled at up to 200 points of its curve;
/// the constraint counts as nonconvex when it is below −1e-8.
struct ConvexityProbe {
  bool nonconvex = false;
  double min_eigenvalue = 0.0;
  Point2 worst_point;
  bool curve_found = false;
};
ConvexityProbe probe_constraint_convexity(const Problem2D& p, std::size_t i);

enum class Verdict {
  kBoundaryInvex,
  kWeaklyBoundaryInvex,
  kViolated,
  kInconclusive,
};

std::string_view to_string(Verdict v);

/// Clause evaluations for one auxiliary point. Weak check: clauses 1–4 are
/// infeasible, not strict, λ >= 0, another constraint active. Boundary
/// check: clauses 1–3 are infeasible, λ >= 0, local max of the full problem.
struct ClauseEvaluation {
  bool infeasible = false;
  bool not_strict = false;
  bool nonnegative_lambda = false;
  bool other_active = false;
  bool local_max = false;
  bool inconclusive = false;
  bool satisfied = false;
  /// Name of the first satisfied clause, or empty.
  std::string satisfied_by;
  Classification classification = Classification::kInconclusive;
};

struct PointEvidence {
  std::size_t constraint = 0;
  AuxiliaryStationaryPoint point;
  ClauseEvaluation clauses;
};

struct ConstraintEvidence {
  std::size_t index = 0;
  std::string name;
  bool nonconvex = false;
  double min_hessian_eigenvalue = 0.0;
  bool curve_found = false;
  bool unbounded_in_box = false;
  bool passed = true;
  bool inconclusive = false;
  std::vector<PointEvidence> points;
  std::vector<std::string> notes;
};

struct InvexityReport {
  Verdict verdict = Verdict::kInconclusive;
  std::vector<ConstraintEvidence> constraints;
  std::vector<PointEvidence> witnesses;
};

/// Weak boundary-invexity: global minimizers of each auxiliary problem of a
/// nonconvex constraint.
InvexityReport check_weak(const Problem2D& p);

/// Boundary-invexity: every stationary point of each auxiliary problem of a
/// nonconvex constraint. A passing verdict certifies KT-invexity.
InvexityReport check_boundary_invex(const Problem2D& p);

/// Checks that f strictly decreases along the ray from y on the line l = 0
/// in the locally decreasing direction, at `samples` points spaced
/// `spacing` apart.
/// @throws ConstantOnLineError when f does not vary along the line.
bool check_ray_decrease(const Expression& f, const Expression& line, Point2 y,
                        int samples, double spacing = 0.01);

}  // namespace invex2d
