#pragma once

#include <cstddef>
#include <vector>

#include "invex2d/boundary.hpp"
#include "invex2d/kkt.hpp"
#include "invex2d/problem.hpp"

namespace invex2d {

struct GridSpec {
  /// Points per axis, >= 2.
  int resolution = 801;
  Box2 box;
};

/// GridSpec covering the problem box.
GridSpec grid_for(const Problem2D& p, int resolution);

struct OracleResult {
  Point2 best_point;
  double best_value = 0.0;
  std::size_t feasible_count = 0;
  std::size_t total_count = 0;
  /// Grid argmax before refinement.
  Point2 grid_point;
  double grid_value = 0.0;
};

/// Exhaustive feasible argmax over the grid (ties go to the
/// lexicographically smallest point), optionally refined by a feasible
/// pattern search whose step shrinks to 1e-10. Points where evaluation
/// leaves the domain count as infeasible.
/// @throws EmptyFeasibleError when no grid point is feasible.
OracleResult grid_global_max(const Problem2D& p, const GridSpec& grid,
                             bool refine = true);

struct KTInvexVerdict {
  bool kt_invex = true;
  double global_value = 0.0;
  Point2 global_point;
  /// gap_k = global value − f(x_k), one per KKT point.
  std::vector<double> gaps;
  double max_gap = 0.0;
  /// Indices into the KKT list with gap > tol.
  std::vector<std::size_t> violators;
};

/// Empirical KT-invexity: every KKT point is within `tol` of the grid
/// global maximum.
KTInvexVerdict verify_kt_invex(const Problem2D& p,
                               const std::vector<KKTPoint>& kkt,
                               const GridSpec& grid, double tol = 1e-3);

/// Boundary-to-interior implication at a verified local maximizer x: if
/// f(x) is at least f at every path node, then f(x) must be within `tol`
/// of the grid maximum. Returns whether the implication held.
/// @throws PreconditionError when x is not a local maximizer.
bool boundary_to_global(const Problem2D& p, Point2 x, const BoundaryPath& path,
                        const GridSpec& grid, double tol = 1e-3);

}  // namespace invex2d
