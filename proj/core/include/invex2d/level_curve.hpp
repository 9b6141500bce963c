#pragma once

#include <vector>

#include "invex2d/expr.hpp"
#include "invex2d/problem.hpp"

namespace invex2d {

/// One connected piece of the curve g = 0 clipped to a box.
struct CurveBranch {
  std::vector<Point2> points;
  bool closed = false;
  /// The branch was cut at the box on that end.
  bool truncated_front = false;
  bool truncated_back = false;
};

struct LevelCurveOptions {
  /// <= 0 selects box diagonal / 4000.
  double step = 0.0;
  /// Seeds come from sign changes of g on a grid with this many cells
  /// per axis.
  int seed_grid = 120;
};

/// Traces every component of {g = 0} ∩ bounds that the seed grid hits,
/// ignoring all other constraints.
/// @throws LicqError where ∇g vanishes on the curve; TraceError on
///         step-control failure.
std::vector<CurveBranch> trace_level_curve(const Function& g,
                                           const Box2& bounds,
                                           const LevelCurveOptions& opt = {});

}  // namespace invex2d
