#include <gtest/gtest.h>

#include <random>

#include "invex2d/error.hpp"
#include "invex2d/opf.hpp"
#include "oracles.hpp"

using namespace invex2d;
using opf::LineParams;

TEST(Opf, CanonicalInstanceConstraints) {
  const opf::OPFInstance inst = opf::build_opf_problem({});
  const Problem2D& p = inst.problem;
  // Two angle, two voltage, two thermal and eight one-sided injection bounds.
  EXPECT_EQ(p.user_constraint_count(), 14u);
  EXPECT_NE(p.find("therm_lim"), Problem2D::npos);
  EXPECT_NE(p.find("therm_lim2"), Problem2D::npos);
  EXPECT_TRUE(p.constraint(p.find("therm_lim")).known_convex);
  EXPECT_FALSE(p.constraint(p.find("therm_lim2")).known_convex);
  EXPECT_EQ(p.box(), (Box2{-1.2, 1.2, -1.2, 1.2}));
  EXPECT_TRUE(p.concavity().concave);

  LineParams q;
  q.p1_hi = opf::kInf;
  q.q2_lo = -opf::kInf;
  EXPECT_EQ(opf::build_opf_problem(q).problem.user_constraint_count(), 12u);
}

TEST(Opf, Preconditions) {
  LineParams a;
  a.theta_hi = std::numbers::pi / 4;
  EXPECT_THROW(opf::build_opf_problem(a), PreconditionError);
  LineParams b;
  b.v_lo = 0.5;
  EXPECT_THROW(opf::build_opf_problem(b), PreconditionError);
  LineParams c;
  c.g = 0;
  EXPECT_THROW(opf::validate(c), PreconditionError);
  LineParams d;
  d.c2 = -0.1;
  EXPECT_THROW(opf::validate(d), PreconditionError);
  LineParams e;
  e.w = 1.2;
  EXPECT_THROW(opf::validate(e), PreconditionError);
  LineParams f;
  f.theta_hi = std::numbers::pi / 3;
  EXPECT_THROW(opf::min_wr_bound(f, 11), PreconditionError);
  EXPECT_THROW(opf::check_opf_invex(f, false), PreconditionError);
}

TEST(Opf, FlowsMatchComplexPowerFlow) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int d = 0; d < 5; ++d) {
    const LineParams q = oracle::random_params(rng);
    const opf::Flows fl = opf::flows(q);
    for (int k = 0; k < 100; ++k) {
      const Point2 x{u(rng), u(rng)};
      const oracle::ComplexFlows c = oracle::complex_flows(q, x.x1, x.x2);
      EXPECT_NEAR(evaluate(fl.p12, x), c.p12, 1e-10);
      EXPECT_NEAR(evaluate(fl.q12, x), c.q12, 1e-10);
      EXPECT_NEAR(evaluate(fl.p21, x), c.p21, 1e-10);
      EXPECT_NEAR(evaluate(fl.q21, x), c.q21, 1e-10);
      const double s = x.x1 * x.x1 + x.x2 * x.x2;
      const double losses = q.g * q.w + (q.g / q.w) * s - 2 * q.g * x.x1;
      EXPECT_NEAR(evaluate(fl.p12, x) + evaluate(fl.p21, x), losses, 1e-10);
      EXPECT_GE(losses, -1e-12);
    }
  }
}

TEST(Opf, FeasibilityMatchesComplexModel) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const LineParams q;
  const opf::OPFInstance inst = opf::build_opf_problem(q);
  int agree = 0, feasible = 0;
  for (int k = 0; k < 20000; ++k) {
    const Point2 x{0.8 + 0.3 * (u(rng) + 1.2) / 2.4, 0.3 * u(rng)};
    const bool a = is_feasible(inst.problem, x, 0.0);
    const bool b = oracle::opf_feasible(q, x.x1, x.x2, 0.0);
    agree += a == b;
    feasible += a;
  }
  EXPECT_EQ(agree, 20000);
  EXPECT_GT(feasible, 100);
}

TEST(Opf, MinWrBoundCanonical) {
  const opf::MinWrReport r = opf::min_wr_bound({}, 801);
  EXPECT_NEAR(r.threshold, std::sqrt(0.9025 / (1.0 / 3.0 + 1.0)), 1e-12);
  EXPECT_GE(r.threshold, 0.82 - 1e-3);
  EXPECT_TRUE(r.chain_holds);
  EXPECT_GT(r.feasible_points, 0u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.min_feasible_wr, r.threshold - 2.4 / 800);
}

TEST(Opf, AuxCandidatesMatchCurveExtrema) {
  std::mt19937_64 rng(43);
  for (int d = 0; d < 5; ++d) {
    const LineParams q = oracle::random_params(rng);
    auto cost = [&](double x, double y) {
      const auto c = oracle::complex_flows(q, x, y);
      return q.c1 * c.p12 + q.c2 * c.p21;
    };
    struct Case {
      opf::AuxKind kind;
      oracle::Fn h;
    };
    const std::vector<Case> cases = {
        {opf::AuxKind::kWbound,
         [&](double x, double y) { return q.v_lo * q.v_lo - (x * x + y * y) / q.w; }},
        {opf::AuxKind::kPbound,
         [&](double x, double y) { return q.p2_lo - oracle::complex_flows(q, x, y).p21; }},
        {opf::AuxKind::kQbound,
         [&](double x, double y) { return q.q2_lo - oracle::complex_flows(q, x, y).q21; }},
    };
    for (const auto& c : cases) {
      const opf::AuxKKTReport r = opf::aux_kkt_points(q, c.kind);
      ASSERT_FALSE(r.no_real_solution) << to_string(c.kind) << " " << r.note;
      ASSERT_FALSE(r.candidates.empty());
      const double m = 25.0;
      const auto pts = oracle::curve_points(c.h, -m, m, -m, m, 2500);
      const auto ext = oracle::curve_extrema(cost, pts);
      for (const auto& cand : r.candidates) {
        EXPECT_GT(cand.lambda, 0.0);
        EXPECT_NEAR(c.h(cand.wr, cand.wi), 0.0, 1e-9) << to_string(c.kind);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : ext) best = std::min(best, distance(e, {cand.wr, cand.wi}));
        EXPECT_LT(best, 0.1) << to_string(c.kind);
        EXPECT_TRUE(cand.below_bound);
        EXPECT_FALSE(cand.feasible);
        EXPECT_FALSE(oracle::opf_feasible(q, cand.wr, cand.wi));
      }
    }
  }
}

TEST(Opf, AuxCanonicalEmptyCurves) {
  const opf::AuxKKTReport p = opf::aux_kkt_points({}, opf::AuxKind::kPbound);
  EXPECT_TRUE(p.no_real_solution);
  EXPECT_TRUE(p.candidates.empty());
  const opf::AuxKKTReport q = opf::aux_kkt_points({}, opf::AuxKind::kQbound);
  EXPECT_TRUE(q.no_real_solution);
  const opf::AuxKKTReport w = opf::aux_kkt_points({}, opf::AuxKind::kWbound);
  ASSERT_EQ(w.candidates.size(), 1u);
  EXPECT_LT(w.candidates[0].wr, 0.0);
}

TEST(Opf, ThermalConvexity) {
  const opf::ThermalReport r = opf::thermal_convexity({}, 1000);
  EXPECT_EQ(r.negative, 1000);
  EXPECT_TRUE(r.all_negative);
  EXPECT_LT(r.psi_residual, 1e-10);
  EXPECT_NEAR(r.threshold_constant, 0.6925, 1e-4);
  EXPECT_TRUE(r.below_077);
  EXPECT_LT(r.max_fd_error, 1e-3);
  EXPECT_NEAR(opf::psi(8.0 / 27.0, 1.0), 4.0 / 27.0, 1e-10);
  EXPECT_THROW(opf::thermal_convexity({}, 5), PreconditionError);
}

// Every feasible point lies right of the thermal threshold, where the
// bus-2 thermal constraint is convex.
TEST(Opf, FeasibleRegionInsideThermalConvexityRange) {
  std::mt19937_64 rng(44);
  for (int d = 0; d < 3; ++d) {
    const LineParams q = d == 0 ? LineParams{} : oracle::random_params(rng);
    const opf::MinWrReport m = opf::min_wr_bound(q, 401);
    const opf::ThermalReport t = opf::thermal_convexity(q, 200);
    if (m.feasible_points > 0) EXPECT_GT(m.min_feasible_wr, t.threshold);
    EXPECT_TRUE(t.all_negative);
  }
}

TEST(Opf, CanonicalIsBoundaryInvex) {
  const opf::OPFInvexReport r = opf::check_opf_invex({}, true, 401);
  EXPECT_EQ(r.invexity.verdict, Verdict::kBoundaryInvex);
  EXPECT_TRUE(r.cross_checked);
  EXPECT_TRUE(r.kt.kt_invex);
  EXPECT_FALSE(r.kkt.empty());
}
