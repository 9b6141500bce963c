#include <gtest/gtest.h>

#include <random>

#include "invex2d/error.hpp"
#include "invex2d/expr.hpp"
#include "oracles.hpp"

using namespace invex2d;

TEST(Parse, SumShape) {
  const Expression e = parse_expression("x1^2 + x2^2 - 1");
  ASSERT_EQ(e.op(), Op::kAdd);
  EXPECT_EQ(e.rhs().op(), Op::kNeg);
  EXPECT_TRUE(e.rhs().operand().is_constant(1.0));
  ASSERT_EQ(e.lhs().op(), Op::kAdd);
  EXPECT_EQ(e.lhs().lhs().op(), Op::kPow);
  EXPECT_EQ(e.lhs().lhs().lhs().var(), 1);
  EXPECT_TRUE(e.lhs().lhs().rhs().is_constant(2.0));
  EXPECT_EQ(e.lhs().rhs().op(), Op::kPow);
  EXPECT_EQ(e.lhs().rhs().lhs().var(), 2);
}

TEST(Parse, FunctionCall) {
  const Expression e = parse_expression("sin(x1*x2)");
  ASSERT_EQ(e.op(), Op::kSin);
  ASSERT_EQ(e.operand().op(), Op::kMul);
  EXPECT_EQ(e.operand().lhs().var(), 1);
  EXPECT_EQ(e.operand().rhs().var(), 2);
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse_expression("x3 + 1");
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_NE(std::string(err.what()).find("unknown identifier \"x3\""), std::string::npos);
    EXPECT_EQ(err.position(), 0u);
  }
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  for (const char* bad : {"x1 +", "(x1", "x1 x2", "sin x1", "2**x1", "", "x1 + )"}) {
    EXPECT_THROW(parse_expression(bad), ParseError) << bad;
  }
  try {
    parse_expression("x1 + * x2");
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 5u);
  }
}

TEST(Parse, PowerIsRightAssociativeAndBindsTighterThanUnaryMinus) {
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("2^3^2"), {0, 0}), 512.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("-x1^2"), {3, 0}), -9.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("2^-1"), {0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("1.5e1 - 3*2"), {0, 0}), 9.0);
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(to_string(differentiate(parse_expression("x1^2 + x2^2 - 1"), 1)), "2*x1");
  EXPECT_EQ(to_string(differentiate(parse_expression("sin(x1*x2)"), 1)), "x2*cos(x1*x2)");
  EXPECT_TRUE(differentiate(parse_expression("5"), 1).is_constant(0.0));
  EXPECT_TRUE(differentiate(parse_expression("x2^3"), 1).is_constant(0.0));
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(parse_expression("x1^2+x2^2-1"), {1, 0}), 0.0);
  EXPECT_EQ(evaluate(parse_expression("x1*x2"), {2, 3}), 6.0);
}

TEST(Evaluate, DomainErrorCarriesSubexpression) {
  try {
    evaluate(parse_expression("x2 + 1/x1"), {0, 1});
    FAIL() << "expected DomainError";
  } catch (const DomainError& err) {
    EXPECT_EQ(err.subexpression(), "1/x1");
  }
  EXPECT_THROW(evaluate(parse_expression("sqrt(x1)"), {-1, 0}), DomainError);
  EXPECT_THROW(evaluate(parse_expression("log(x1 - 1)"), {1, 0}), DomainError);
  EXPECT_THROW(evaluate(parse_expression("x1^0.5"), {-1, 0}), DomainError);
}

TEST(Evaluate, IntegerPowerOfNegativeBase) {
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("x1^3"), {-2, 0}), -8.0);
  EXPECT_DOUBLE_EQ(evaluate(parse_expression("x1^-2"), {-2, 0}), 0.25);
  CompiledExpression c(parse_expression("x1^3 + x2^-1"));
  EXPECT_DOUBLE_EQ(c({-2, -1}), -9.0);
}

TEST(Compiled, MatchesTreeAndReportsDomain) {
  oracle::ExprGen gen(7);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 200; ++k) {
    const Expression e = parse_expression(gen.next().text);
    CompiledExpression c(e);
    const Point2 x{u(rng), u(rng)};
    EXPECT_NEAR(c(x), evaluate(e, x), 1e-12 * std::max(1.0, std::fabs(evaluate(e, x))));
  }
  CompiledExpression bad(parse_expression("log(x1)"));
  bool domain = false;
  bad.eval({-1, 0}, &domain);
  EXPECT_TRUE(domain);
  EXPECT_THROW(bad({-1, 0}), DomainError);
}

TEST(Print, RoundTripsThroughParser) {
  oracle::ExprGen gen(11);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 300; ++k) {
    const Expression e = parse_expression(gen.next().text);
    const Expression back = parse_expression(to_string(e));
    EXPECT_TRUE(back == e) << to_string(e);
  }
  for (const char* s : {"-(x1 - x2)^2 - 2*x1/(3 - x2)", "x1 - (x2 - 1)", "-x1^2", "(-x1)^2",
                        "x1/(x2*x1)", "2^(x1 + 1)", "-(-x1)"}) {
    const Expression e = parse_expression(s);
    EXPECT_TRUE(parse_expression(to_string(e)) == e) << s;
  }
}

TEST(Differentiate, MatchesFiniteDifferences) {
  oracle::ExprGen gen(2024);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const oracle::RandomExpr r = gen.next();
    const Expression e = parse_expression(r.text);
    const Function fn(e);
    const double x = u(rng), y = u(rng);
    const Vec2 fd = oracle::fd_gradient(r.fn, x, y);
    const Vec2 g = fn.gradient({x, y});
    for (int c = 0; c < 2; ++c) {
      const double a = c == 0 ? g.x1 : g.x2;
      const double b = c == 0 ? fd.x1 : fd.x2;
      EXPECT_LE(std::fabs(a - b), 1e-5 * std::max(1.0, std::fabs(b))) << r.text;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Differentiate, CommutesWithFolding) {
  oracle::ExprGen gen(5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 200; ++k) {
    const Expression e = parse_expression(gen.next().text);
    for (int var = 1; var <= 2; ++var) {
      const Expression a = differentiate(fold_constants(e), var);
      const Expression b = fold_constants(differentiate(e, var));
      for (int s = 0; s < 20; ++s) {
        const Point2 x{u(rng), u(rng)};
        const double va = evaluate(a, x);
        EXPECT_NEAR(va, evaluate(b, x), 1e-12 * std::max(1.0, std::fabs(va)));
      }
    }
  }
}

TEST(Function, HessianMatchesFiniteDifferenceOfGradient) {
  const Function f(parse_expression("sin(x1)*x2^2 + exp(x1*x2)"));
  const Point2 x{0.3, -0.7};
  const double h = 1e-6;
  const Sym2 hs = f.hessian(x);
  const Vec2 g1p = f.gradient({x.x1 + h, x.x2}), g1m = f.gradient({x.x1 - h, x.x2});
  const Vec2 g2p = f.gradient({x.x1, x.x2 + h}), g2m = f.gradient({x.x1, x.x2 - h});
  EXPECT_NEAR(hs.a11, (g1p.x1 - g1m.x1) / (2 * h), 1e-6);
  EXPECT_NEAR(hs.a12, (g2p.x1 - g2m.x1) / (2 * h), 1e-6);
  EXPECT_NEAR(hs.a22, (g2p.x2 - g2m.x2) / (2 * h), 1e-6);
}

TEST(Expr, AffineDetection) {
  EXPECT_TRUE(is_affine(parse_expression("2*x1 - 3*x2 + 1")));
  EXPECT_TRUE(is_affine(parse_expression("(x1 + x2)/4")));
  EXPECT_FALSE(is_affine(parse_expression("x1*x2")));
  EXPECT_FALSE(is_affine(parse_expression("sin(x1)")));
}
