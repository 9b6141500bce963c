#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "invex2d/problem.hpp"

namespace invex2d {

struct BoundaryNode {
  /// Accumulated chord length from the first node.
  double t = 0.0;
  Point2 point;
  /// Constraint followed from this node on.
  std::size_t active = 0;
  bool is_corner = false;
  /// At corners: constraint followed into (incoming) and out of (outgoing)
  /// the node; outgoing == active.
  std::size_t incoming = 0;
  std::size_t outgoing = 0;
};

/// Polyline discretization of one component of ∂F, traversed in the
/// positive direction (−∂g/∂x2, ∂g/∂x1) of the active constraint.
struct BoundaryPath {
  std::vector<BoundaryNode> nodes;
  bool closed = false;
  /// Total length, closing chord included for closed paths.
  double length = 0.0;
  double step = 0.0;

  /// Distance between the last and the first node.
  double closure_gap() const;
  std::size_t corner_count() const;
};

struct TraceOptions {
  /// Nominal step; <= 0 selects 1e-2 × box diagonal.
  double step = 0.0;
  int max_newton = 50;
  double newton_tol = 1e-10;
  int max_halvings = 20;
  /// 0 selects 10 × box perimeter / step.
  std::size_t max_steps = 0;
};

/// Traces the boundary component through `start` by predictor–corrector
/// continuation with corner detection.
/// @throws PreconditionError if start is not a feasible boundary point.
/// @throws LicqError on a degenerate gradient.
/// @throws TraceError on step-control failure, runaway curves, or a corner
///         with non-positive corner_check.
BoundaryPath trace_boundary(const Problem2D& p, Point2 start, double step);
BoundaryPath trace_boundary(const Problem2D& p, Point2 start,
                            const TraceOptions& opt);

/// Traces every boundary component it can seed: sign changes of each
/// constraint on a grid plus samples along the box edges.
std::vector<BoundaryPath> trace_all_boundaries(const Problem2D& p,
                                               double step = 0.0);

/// cross(∇g_incoming, ∇g_outgoing) at a corner node.
double corner_check(const Problem2D& p, const BoundaryNode& corner);

/// True iff no two non-adjacent segments of the polyline intersect. For
/// closed paths the closing segment is included.
/// @throws PreconditionError with fewer than 3 nodes.
bool is_simple(const BoundaryPath& path);

struct Crossing {
  std::size_t k = 0;
  double t = 0.0;
  Point2 point;
  /// Even for crossings from l > 0 into l < 0.
  bool even = true;
  /// Sign of cross(tangent, ∇l) at the crossing.
  int cross_sign = 0;
  /// Largest f on the path between this crossing and the next one.
  double max_f_to_next = 0.0;
};

struct CrossingSequence {
  std::vector<Crossing> crossings;
  std::vector<std::string> warnings;
};

/// Enumerates the points where the path crosses the line l = 0, ordered
/// along the path starting from a crossing into l < 0.
/// @throws PreconditionError when l is not affine.
/// @throws ConstantOnLineError when ∇f × ∇l vanishes at every node.
CrossingSequence crossing_sequence(const Problem2D& p,
                                   const BoundaryPath& path,
                                   const Expression& l);

}  // namespace invex2d
