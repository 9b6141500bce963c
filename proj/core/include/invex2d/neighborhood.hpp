#pragma once

#include <vector>

#include "invex2d/problem.hpp"

namespace invex2d {

struct NeighborhoodOptions {
  int directions = 64;
  std::vector<double> radii = {1e-4, 1e-3};
  /// A sampled feasible point must beat f(x) by more than this to count.
  double improvement_tol = 1e-10;
};

struct NeighborhoodResult {
  bool is_local_max = true;
  double best_improvement = 0.0;
  Point2 best_point;
  int feasible_samples = 0;
};

/// Empirical local-maximality test: evaluates f at evenly spaced directions
/// on each radius. Infeasible trial points are pulled back onto the violated
/// constraints by Newton steps; points that cannot be repaired are dropped.
NeighborhoodResult sample_neighborhood(const Problem2D& p, Point2 x,
                                       const NeighborhoodOptions& opt = {});

/// Pulls y into F by Newton steps on the most violated constraint until
/// every g_i(y) <= tol. Returns false if that does not happen.
bool repair_feasibility(const Problem2D& p, Point2& y, double tol = 1e-13,
                        int max_iter = 60);

}  // namespace invex2d
