#include <gtest/gtest.h>

#include "invex2d/boundary.hpp"
#include "invex2d/error.hpp"
#include "invex2d/kkt.hpp"
#include "invex2d/neighborhood.hpp"
#include "invex2d/oracle.hpp"

using namespace invex2d;

namespace {

const Box2 kBox{-2, 2, -2, 2};

Problem2D make(const char* f, std::vector<std::pair<const char*, const char*>> cs,
               Box2 box = kBox) {
  std::vector<ConstraintSpec> specs;
  for (auto& [n, e] : cs) specs.push_back({n, parse_expression(e), false});
  return Problem2D(parse_expression(f), std::move(specs), box);
}

}  // namespace

TEST(Grid, ConcaveOnDisk) {
  const Problem2D p = make("-x1^2 - x2^2", {{"g", "x1^2 + x2^2 - 1"}});
  const OracleResult r = grid_global_max(p, grid_for(p, 201));
  EXPECT_EQ(r.total_count, 201u * 201u);
  EXPECT_LT(norm(r.best_point), 1e-12);
  EXPECT_NEAR(r.best_value, 0.0, 1e-12);
}

TEST(Grid, LinearOnDisk) {
  const Problem2D p = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  const GridSpec grid = grid_for(p, 801);
  const double h = grid.box.width() / (grid.resolution - 1);
  const OracleResult r = grid_global_max(p, grid, false);
  EXPECT_LT(distance(r.best_point, {1, 0}), 2 * h);
  EXPECT_NEAR(r.best_value, 1.0, 1e-3);
  const OracleResult refined = grid_global_max(p, grid);
  EXPECT_GE(refined.best_value, r.best_value);
  EXPECT_NEAR(refined.best_value, 1.0, 1e-6);
}

TEST(Grid, EmptyFeasibleSet) {
  const Problem2D p = make("x1", {{"g", "(x1 - 5)^2 + x2^2 - 1"}});
  EXPECT_THROW(grid_global_max(p, grid_for(p, 101)), EmptyFeasibleError);
}

TEST(Grid, TieBreaksToLexicographicallySmallest) {
  const Problem2D p = make("-x2", {{"hole", "1 - x1^2 - x2^2"}});
  const OracleResult r = grid_global_max(p, grid_for(p, 101), false);
  EXPECT_EQ(r.best_point.x1, -2.0);
  EXPECT_EQ(r.best_point.x2, -2.0);
}

TEST(Grid, FinerGridNeverWorse) {
  const char* objectives[] = {"x1 + 0.37*x2", "-(x1 - 0.71)^2 - (x2 + 1.3)^2", "-x2 + 0.1*x1"};
  for (const char* f : objectives) {
    const Problem2D p = make(f, {{"hole", "1 - x1^2 - x2^2"}, {"cut", "x1 + x2 - 1.5"}});
    const double a = grid_global_max(p, grid_for(p, 101)).best_value;
    const double b = grid_global_max(p, grid_for(p, 201)).best_value;
    EXPECT_GE(b, a - 1e-12) << f;
  }
}

TEST(Grid, PermutedEvaluationOrderGivesSameValue) {
  const Problem2D p = make("x1 + x2", {{"g", "x1^2 + x2^2 - 1"}});
  const GridSpec grid = grid_for(p, 301);
  const OracleResult r = grid_global_max(p, grid, false);
  // Independent scan in reverse order over the same lattice.
  double best = -std::numeric_limits<double>::infinity();
  const double h = grid.box.width() / (grid.resolution - 1);
  for (int i = grid.resolution - 1; i >= 0; --i) {
    for (int j = grid.resolution - 1; j >= 0; --j) {
      const Point2 x{grid.box.lo1 + i * h, grid.box.lo2 + j * h};
      if (x.x1 * x.x1 + x.x2 * x.x2 - 1 <= 1e-8) best = std::max(best, x.x1 + x.x2);
    }
  }
  EXPECT_EQ(r.grid_value, best);
}

TEST(KtInvex, Examples) {
  const Problem2D disk = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  const auto kd = find_kkt_points(disk, trace_all_boundaries(disk));
  EXPECT_TRUE(verify_kt_invex(disk, kd, grid_for(disk, 801)).kt_invex);

  const Problem2D anti = make("-x2", {{"hole", "1 - x1^2 - x2^2"}});
  const auto ka = find_kkt_points(anti, trace_all_boundaries(anti));
  const KTInvexVerdict va = verify_kt_invex(anti, ka, grid_for(anti, 801));
  EXPECT_FALSE(va.kt_invex);
  EXPECT_NEAR(va.max_gap, 3.0, 1e-3);
  EXPECT_NEAR(va.global_value, 2.0, 1e-9);

  const Problem2D right = make("x1", {{"hole", "1 - x1^2 - x2^2"}, {"right", "-x1"}});
  const auto kr = find_kkt_points(right, trace_all_boundaries(right));
  EXPECT_TRUE(verify_kt_invex(right, kr, grid_for(right, 801)).kt_invex);
}

TEST(BoundaryToGlobal, Examples) {
  const Problem2D disk = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  const BoundaryPath path = trace_boundary(disk, {1, 0}, 0.01);
  EXPECT_TRUE(boundary_to_global(disk, {1, 0}, path, grid_for(disk, 401)));

  const Problem2D bowl = make("-x1^2 - x2^2", {{"g", "x1^2 + x2^2 - 1"}});
  const BoundaryPath bp = trace_boundary(bowl, {1, 0}, 0.01);
  EXPECT_THROW(boundary_to_global(bowl, {1, 0}, bp, grid_for(bowl, 401)), PreconditionError);

  const Problem2D cres = make("x1", {{"hole", "1 - x1^2 - x2^2"}, {"cut", "-x1 - 0.5"}});
  const auto paths = trace_all_boundaries(cres);
  const auto kkt = find_kkt_points(cres, paths);
  int checked = 0;
  for (const auto& k : kkt) {
    if (k.classification != Classification::kLocalMax) continue;
    EXPECT_TRUE(boundary_to_global(cres, k.location, paths[0], grid_for(cres, 401)));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Neighborhood, RepairStaysNearby) {
  const Problem2D p = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  Point2 y{1.001, 0.0005};
  ASSERT_TRUE(repair_feasibility(p, y));
  EXPECT_LE(p.constraint(0).fn.value(y), 1e-13);
  EXPECT_LT(distance(y, {1.001, 0.0005}), 2e-3);
  const NeighborhoodResult r = sample_neighborhood(p, {1, 0});
  EXPECT_TRUE(r.is_local_max);
  EXPECT_GT(r.feasible_samples, 0);
  const NeighborhoodResult s = sample_neighborhood(p, {0, 1});
  EXPECT_FALSE(s.is_local_max);
}
