#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "invex2d/boundary.hpp"
#include "invex2d/problem.hpp"

namespace invex2d {

enum class Classification {
  kLocalMax,
  kNotLocalMax,
  kInteriorUnconstrainedMax,
  kInconclusive,
};

std::string_view to_string(Classification c);

/// Result of testing the KKT conditions at one point.
struct KKTCheck {
  bool is_kkt = false;
  ActiveSet active;
  /// Multipliers of the active, non-redundant constraints; every other
  /// constraint has multiplier 0.
  std::map<std::size_t, double> multipliers;
  /// ‖∇f(x) − Σ μ_i ∇g_i(x)‖.
  double residual = 0.0;
};

struct KKTPoint {
  Point2 location;
  ActiveSet active;
  std::map<std::size_t, double> multipliers;
  Classification classification = Classification::kInconclusive;
  double objective_value = 0.0;
  double residual = 0.0;
};

/// Details of a classification, for reports.
struct ClassificationDetail {
  Classification classification = Classification::kInconclusive;
  /// What the multiplier / curvature analysis said, before sampling.
  Classification second_order = Classification::kInconclusive;
  /// wᵀ∇²L w along the critical direction, when it was evaluated.
  double curvature = 0.0;
  bool sampled_local_max = false;
  double sampled_improvement = 0.0;
};

/// Multipliers (μ_i, μ_j) with ∇f = μ_i ∇g_i + μ_j ∇g_j at x, from
/// μ_i = cross(∇f, ∇g_j)/cross(∇g_i, ∇g_j) and
/// μ_j = cross(∇g_i, ∇f)/cross(∇g_i, ∇g_j).
/// @throws LicqError when the gradients are (nearly) parallel.
std::pair<double, double> multipliers_two_active(const Problem2D& p, Point2 x,
                                                 std::size_t i, std::size_t j);

/// Tests the KKT conditions at a feasible point.
/// @throws DegenerateVertexError with more than two non-redundant active
///         constraints; LicqError on degenerate gradients.
KKTCheck is_kkt(const Problem2D& p, Point2 x);

/// Second-order classification of a KKT point, cross-checked by
/// neighborhood sampling.
/// @throws PreconditionError when x is not a KKT point.
Classification classify(const Problem2D& p, Point2 x);
ClassificationDetail classify_detail(const Problem2D& p, Point2 x);
ClassificationDetail classify_detail(const Problem2D& p, Point2 x,
                                     const KKTCheck& kkt);

struct KKTSearchOptions {
  /// Random restarts of the interior Newton search.
  int restarts = 8;
  std::uint64_t seed = 0;
  double dedup_radius = 1e-6;
};

/// All KKT points found on the traced boundary components, at their
/// corners, and in the interior.
std::vector<KKTPoint> find_kkt_points(const Problem2D& p,
                                      const std::vector<BoundaryPath>& paths,
                                      const KKTSearchOptions& opt = {});
std::vector<KKTPoint> find_kkt_points(const Problem2D& p,
                                      const BoundaryPath& boundary,
                                      int seeds = 8);

}  // namespace invex2d
