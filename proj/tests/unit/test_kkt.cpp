#include <gtest/gtest.h>

#include <random>

#include "invex2d/boundary.hpp"
#include "invex2d/error.hpp"
#include "invex2d/geometry.hpp"
#include "invex2d/kkt.hpp"
#include "oracles.hpp"

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

TEST(Multipliers, Examples) {
  const Problem2D a = make("x1 + x2", {{"gi", "x1 - 1"}, {"gj", "x2 - 1"}});
  auto [m1, m2] = multipliers_two_active(a, {1, 1}, 0, 1);
  EXPECT_DOUBLE_EQ(m1, 1.0);
  EXPECT_DOUBLE_EQ(m2, 1.0);
  const Problem2D b = make("x1", {{"gi", "x1 - 1"}, {"gj", "x2 - 1"}});
  std::tie(m1, m2) = multipliers_two_active(b, {1, 1}, 0, 1);
  EXPECT_DOUBLE_EQ(m1, 1.0);
  EXPECT_DOUBLE_EQ(m2, 0.0);
  const Problem2D c = make("x1", {{"gi", "x1^2 + x2^2 - 1"}, {"gj", "x2"}});
  std::tie(m1, m2) = multipliers_two_active(c, {1, 0}, 0, 1);
  const auto [s1, s2] = oracle::solve_columns({2, 0}, {0, 1}, {1, 0});
  EXPECT_NEAR(m1, s1, 1e-15);
  EXPECT_NEAR(m2, s2, 1e-15);
  EXPECT_DOUBLE_EQ(m1, 0.5);
}

TEST(Multipliers, ParallelGradientsViolateLicq) {
  const Problem2D p = make("x1", {{"a", "x1 - 1"}, {"b", "2*x1 - 2"}});
  EXPECT_THROW(multipliers_two_active(p, {1, 0}, 0, 1), LicqError);
}

TEST(Multipliers, MatchDirectSolve) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    const double a11 = -0.2 - std::fabs(u(rng)), a22 = -0.2 - std::fabs(u(rng));
    const double a12 = 0.1 * u(rng);
    const double b1 = u(rng), b2 = u(rng);
    const Point2 x{u(rng), u(rng)};
    const Vec2 n1{u(rng), u(rng)}, n2{u(rng), u(rng)};
    if (std::fabs(cross(n1, n2)) < 1e-3) continue;
    auto lin = [&](Vec2 n) {
      const double c = -(n.x1 * x.x1 + n.x2 * x.x2);
      return Expression::constant(n.x1) * x1() + Expression::constant(n.x2) * x2() +
             Expression::constant(c);
    };
    const Expression f = Expression::constant(a11) * x1() * x1() +
                         Expression::constant(2 * a12) * x1() * x2() +
                         Expression::constant(a22) * x2() * x2() +
                         Expression::constant(b1) * x1() + Expression::constant(b2) * x2();
    const Problem2D p(f, {{"g1", lin(n1), false}, {"g2", lin(n2), false}}, Box2{-3, 3, -3, 3});
    const Vec2 df{2 * a11 * x.x1 + 2 * a12 * x.x2 + b1, 2 * a12 * x.x1 + 2 * a22 * x.x2 + b2};
    const auto [s1, s2] = oracle::solve_columns(n1, n2, df);
    const auto [m1, m2] = multipliers_two_active(p, x, 0, 1);
    EXPECT_NEAR(m1, s1, 1e-10 * std::max(1.0, std::fabs(s1)));
    EXPECT_NEAR(m2, s2, 1e-10 * std::max(1.0, std::fabs(s2)));
  }
}

// With the pair ordered so that cross(∇g1, ∇g2) > 0, both multipliers are
// non-negative exactly when cross(∇f, ∇g2) ≥ 0 and cross(∇f, ∇g1) ≤ 0.
TEST(Multipliers, SignEquivalence) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1, 1);
  int trials = 0;
  while (trials < 1000) {
    Vec2 n1{u(rng), u(rng)}, n2{u(rng), u(rng)};
    const Vec2 df{u(rng), u(rng)};
    if (std::fabs(cross(n1, n2)) < 1e-2) continue;
    if (cross(n1, n2) < 0) std::swap(n1, n2);
    const Point2 x{0.5 * u(rng), 0.5 * u(rng)};
    auto lin = [&](Vec2 n) {
      return Expression::constant(n.x1) * (x1() - Expression::constant(x.x1)) +
             Expression::constant(n.x2) * (x2() - Expression::constant(x.x2));
    };
    const Problem2D p(Expression::constant(df.x1) * x1() + Expression::constant(df.x2) * x2(),
                      {{"g1", lin(n1), false}, {"g2", lin(n2), false}}, kBox);
    const double eps = 1e-8 * norm(df) * std::max(norm(n1), norm(n2));
    const bool by_sign = cross(df, n2) >= -eps && cross(df, n1) <= eps;
    EXPECT_EQ(is_kkt(p, x).is_kkt, by_sign);
    ++trials;
  }
}

TEST(IsKkt, Examples) {
  const Problem2D p = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  const KKTCheck a = is_kkt(p, {1, 0});
  EXPECT_TRUE(a.is_kkt);
  EXPECT_NEAR(a.multipliers.at(0), 0.5, 1e-14);
  EXPECT_FALSE(is_kkt(p, {-1, 0}).is_kkt);
  const Problem2D q = make("-x1^2 - x2^2", {});
  const KKTCheck c = is_kkt(q, {0, 0});
  EXPECT_TRUE(c.is_kkt);
  EXPECT_TRUE(c.active.empty());
}

TEST(IsKkt, DegenerateVertex) {
  const Problem2D p = make("x1 + x2", {{"a", "x1 + x2 - 2"}, {"b", "x1 - 1"}, {"c", "x2 - 1"},
                                      {"d", "x1 + 2*x2 - 3"}});
  EXPECT_THROW(is_kkt(p, {1, 1}), DegenerateVertexError);
}

TEST(Classify, Examples) {
  const Problem2D a = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  const ClassificationDetail d = classify_detail(a, {1, 0});
  EXPECT_EQ(d.classification, Classification::kLocalMax);
  EXPECT_TRUE(d.sampled_local_max);
  const Problem2D b = make("-x2", {{"g", "1 - x1^2 - x2^2"}});
  EXPECT_EQ(classify(b, {0, 1}), Classification::kNotLocalMax);
  const Problem2D c = make("-x1^2 - x2^2", {{"g", "x1^2 + x2^2 - 1"}});
  EXPECT_EQ(classify(c, {0, 0}), Classification::kInteriorUnconstrainedMax);
  EXPECT_EQ(to_string(Classification::kLocalMax), "local-max");
}

TEST(Classify, CurvatureAlongNonconvexConstraint) {
  // Outside a disk of radius 2 with f = x1: (2,0) is not KKT, (−2,0) has
  // μ = 1/4 and curvature +1/2 along the circle, so it is not a local max.
  const Problem2D p = make("x1", {{"g", "4 - x1^2 - x2^2"}}, Box2{-3, 3, -3, 3});
  const KKTCheck k = is_kkt(p, {-2, 0});
  ASSERT_TRUE(k.is_kkt);
  const ClassificationDetail d = classify_detail(p, {-2, 0}, k);
  EXPECT_EQ(d.classification, Classification::kNotLocalMax);
  EXPECT_GT(d.curvature, 0.0);
}

TEST(Classify, RejectsNonKkt) {
  const Problem2D p = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  EXPECT_THROW(classify(p, {-1, 0}), PreconditionError);
}

namespace {

// KKT points on the boundary by dense scan: sign changes of the tangential
// derivative of f along the circle of radius r.
std::vector<Point2> scan_circle_stationary(const oracle::Fn& f, double r, int n) {
  std::vector<Point2> out;
  auto slope = [&](double a) {
    const double h = 1e-7;
    return (f(r * std::cos(a + h), r * std::sin(a + h)) -
            f(r * std::cos(a - h), r * std::sin(a - h))) / (2 * h);
  };
  for (int k = 0; k < n; ++k) {
    const double a = 2 * std::numbers::pi * k / n, b = 2 * std::numbers::pi * (k + 1) / n;
    if ((slope(a) > 0) != (slope(b) > 0)) {
      const double m = 0.5 * (a + b);
      out.push_back({r * std::cos(m), r * std::sin(m)});
    }
  }
  return out;
}

}  // namespace

TEST(FindKkt, LinearObjectiveOnDisk) {
  const Problem2D p = make("x1", {{"g", "x1^2 + x2^2 - 1"}});
  const auto paths = trace_all_boundaries(p, 0.01);
  const auto kkt = find_kkt_points(p, paths);
  ASSERT_EQ(kkt.size(), 1u);
  EXPECT_NEAR(kkt[0].location.x1, 1.0, 1e-8);
  EXPECT_NEAR(kkt[0].location.x2, 0.0, 1e-8);
  // Dense scan oracle: stationary points of x1 on the circle are (±1, 0);
  // only (1, 0) has a non-negative multiplier.
  const auto st = scan_circle_stationary([](double a, double) { return a; }, 1.0, 100000);
  ASSERT_EQ(st.size(), 2u);
  int kkt_like = 0;
  for (auto& s : st) kkt_like += s.x1 > 0;
  EXPECT_EQ(kkt_like, 1);
}

TEST(FindKkt, ConcaveInterior) {
  const Problem2D p = make("-x1^2 - x2^2", {{"g", "x1^2 + x2^2 - 1"}});
  const auto kkt = find_kkt_points(p, trace_all_boundaries(p, 0.01));
  ASSERT_EQ(kkt.size(), 1u);
  EXPECT_LT(norm(kkt[0].location), 1e-9);
  EXPECT_EQ(kkt[0].classification, Classification::kInteriorUnconstrainedMax);
}

TEST(FindKkt, AntiDisk) {
  const Problem2D p = make("-x2", {{"g", "1 - x1^2 - x2^2"}});
  const auto kkt = find_kkt_points(p, trace_all_boundaries(p));
  bool top = false, edge = false;
  for (const auto& k : kkt) {
    top = top || distance(k.location, {0, 1}) < 1e-6;
    edge = edge || std::fabs(k.location.x2 + 2) < 1e-9;
  }
  EXPECT_TRUE(top);
  EXPECT_TRUE(edge);
}

TEST(FindKkt, PointsSatisfyInvariants) {
  const char* objectives[] = {"x1", "-x2", "x1 + 0.5*x2", "-(x1 - 1)^2 - (x2 - 0.3)^2",
                              "-x1^2 + x1*x2 - x2^2 + x2"};
  for (const char* f : objectives) {
    const Problem2D p = make(f, {{"hole", "1 - x1^2 - x2^2"}, {"cut", "-x1 - 0.5"}});
    for (const auto& k : find_kkt_points(p, trace_all_boundaries(p))) {
      EXPECT_LE(k.residual, 1e-6) << f;
      EXPECT_TRUE(is_feasible(p, k.location)) << f;
      for (std::size_t i = 0; i < p.constraints().size(); ++i) {
        const auto it = k.multipliers.find(i);
        if (!k.active.contains(i)) {
          EXPECT_TRUE(it == k.multipliers.end() || it->second == 0.0);
        } else if (it != k.multipliers.end()) {
          EXPECT_GE(it->second, -1e-8);
        }
      }
    }
  }
}
