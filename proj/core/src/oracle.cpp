#include "invex2d/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "invex2d/error.hpp"

namespace invex2d {

GridSpec grid_for(const Problem2D& p, int resolution) {
  return {resolution, p.box()};
}

namespace {

// f(x) when x is feasible, nullopt otherwise.
std::optional<double> feasible_value(const Problem2D& p, Point2 x) {
  const double tol = p.tolerances().feasibility;
  bool bad = false;
  for (const auto& c : p.constraints()) {
    const double v = c.fn.value(x, &bad);
    if (bad || !(v <= tol)) return std::nullopt;
  }
  const double fx = p.objective().value(x, &bad);
  if (bad || !std::isfinite(fx)) return std::nullopt;
  return fx;
}

}  // namespace

OracleResult grid_global_max(const Problem2D& p, const GridSpec& grid,
                             bool refine) {
  if (grid.resolution < 2) throw PreconditionError("grid resolution < 2");
  const Box2& b = grid.box;
  const int n = grid.resolution;
  const double h1 = b.width() / (n - 1);
  const double h2 = b.height() / (n - 1);

  OracleResult r;
  bool found = false;
  for (int i = 0; i < n; ++i) {
    const double x1 = i == n - 1 ? b.hi1 : b.lo1 + i * h1;
    for (int j = 0; j < n; ++j) {
      const double x2 = j == n - 1 ? b.hi2 : b.lo2 + j * h2;
      ++r.total_count;
      const auto v = feasible_value(p, {x1, x2});
      if (!v) continue;
      ++r.feasible_count;
      if (!found || *v > r.grid_value) {
        found = true;
        r.grid_value = *v;
        r.grid_point = {x1, x2};
      }
    }
  }
  if (!found) throw EmptyFeasibleError("no feasible grid point");
  r.best_point = r.grid_point;
  r.best_value = r.grid_value;
  if (!refine) return r;

  // Feasible pattern search over eight compass directions.
  static constexpr double kDirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                         {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  double step = std::max(h1, h2);
  Point2 x = r.best_point;
  double fx = r.best_value;
  while (step > 1e-10) {
    bool moved = false;
    for (const auto& d : kDirs) {
      const Point2 y{x.x1 + step * d[0], x.x2 + step * d[1]};
      if (y.x1 < b.lo1 || y.x1 > b.hi1 || y.x2 < b.lo2 || y.x2 > b.hi2) continue;
      const auto v = feasible_value(p, y);
      if (v && *v > fx) {
        x = y;
        fx = *v;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  r.best_point = x;
  r.best_value = fx;
  return r;
}

KTInvexVerdict verify_kt_invex(const Problem2D& p,
                               const std::vector<KKTPoint>& kkt,
                               const GridSpec& grid, double tol) {
  const OracleResult g = grid_global_max(p, grid, true);
  KTInvexVerdict v;
  v.global_value = g.best_value;
  v.global_point = g.best_point;
  for (std::size_t k = 0; k < kkt.size(); ++k) {
    const double gap = g.best_value - p.objective().value(kkt[k].location);
    v.gaps.push_back(gap);
    v.max_gap = std::max(v.max_gap, gap);
    if (gap > tol) v.violators.push_back(k);
  }
  v.kt_invex = v.violators.empty();
  return v;
}

bool boundary_to_global(const Problem2D& p, Point2 x, const BoundaryPath& path,
                        const GridSpec& grid, double tol) {
  if (!is_feasible(p, x)) throw PreconditionError("point is infeasible");
  const KKTCheck chk = is_kkt(p, x);
  if (!chk.is_kkt) {
    throw PreconditionError("point is not a KKT point, so not a local max");
  }
  const Classification c = classify_detail(p, x, chk).classification;
  if (c != Classification::kLocalMax &&
      c != Classification::kInteriorUnconstrainedMax) {
    throw PreconditionError("point is not a verified local maximizer");
  }
  const double fx = p.objective().value(x);
  for (const auto& node : path.nodes) {
    if (fx < p.objective().value(node.point) - 1e-9) return true;
  }
  return fx >= grid_global_max(p, grid, true).best_value - tol;
}

}  // namespace invex2d
