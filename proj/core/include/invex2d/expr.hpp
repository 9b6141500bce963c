#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "invex2d/vec2.hpp"

namespace invex2d {

enum class Op : std::uint8_t {
  kConst,
  kVar,
  kNeg,
  kSin,
  kCos,
  kTan,
  kSqrt,
  kExp,
  kLog,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
};

bool is_unary(Op op);
bool is_binary(Op op);
/// Function name for unary function ops ("sin", ...), empty otherwise.
std::string_view function_name(Op op);

struct Node;

/// Immutable expression tree over the variables x1 and x2.
///
/// Copies share structure; nothing is ever mutated after construction, so
/// expressions may be used freely from several threads.
class Expression {
 public:
  /// The constant 0.
  Expression();

  static Expression constant(double value);
  /// `index` must be 1 or 2.
  static Expression variable(int index);
  static Expression unary(Op op, Expression operand);
  static Expression binary(Op op, Expression lhs, Expression rhs);

  Op op() const;
  /// Constant value; only meaningful for kConst.
  double value() const;
  /// Variable index; only meaningful for kVar.
  int var() const;
  const Expression& operand() const;
  const Expression& lhs() const;
  const Expression& rhs() const;

  bool is_constant() const { return op() == Op::kConst; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  /// Number of nodes in the tree.
  std::size_t size() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  friend struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator+(const Expression& a, double b);
Expression operator+(double a, const Expression& b);
Expression operator-(const Expression& a, double b);
Expression operator-(double a, const Expression& b);
Expression operator*(double a, const Expression& b);
Expression operator*(const Expression& a, double b);
Expression operator/(const Expression& a, double b);
Expression pow(const Expression& base, const Expression& exponent);
Expression pow(const Expression& base, double exponent);
Expression sin(const Expression& e);
Expression cos(const Expression& e);
Expression tan(const Expression& e);
Expression sqrt(const Expression& e);
Expression exp(const Expression& e);
Expression log(const Expression& e);

inline Expression x1() { return Expression::variable(1); }
inline Expression x2() { return Expression::variable(2); }

/// Parses a formula over x1, x2. Precedence, lowest first: + -, * /,
/// unary minus, ^ (right associative). Subtraction `a - b` is read as
/// Add(a, Neg(b)); no folding is applied.
/// @throws ParseError on malformed text or unknown identifiers.
Expression parse_expression(std::string_view text);

/// Exact partial derivative with respect to x<var>, constant-folded.
Expression differentiate(const Expression& e, int var);

/// Bottom-up constant folding plus identity elimination. Idempotent.
Expression fold_constants(const Expression& e);

/// Evaluates with domain checking.
/// @throws DomainError naming the offending subexpression.
double evaluate(const Expression& e, Point2 x);

/// Text that re-parses to an expression equal to `e` after folding.
std::string to_string(const Expression& e);

/// True when every second derivative folds to the constant 0.
bool is_affine(const Expression& e);

/// Flat postfix program for fast repeated evaluation.
class CompiledExpression {
 public:
  CompiledExpression() = default;
  explicit CompiledExpression(const Expression& e);

  /// Evaluates without throwing. Sets *domain_error when any operation left
  /// its domain; the returned value is then meaningless.
  double eval(Point2 x, bool* domain_error) const;

  /// Evaluates; on a domain problem re-runs the tree evaluator, which throws
  /// DomainError with the offending subexpression.
  double operator()(Point2 x) const;

  const Expression& source() const { return source_; }

 private:
  struct Instr {
    Op op;
    int ivalue;  // variable index or integer exponent
    double value;
    bool int_pow;
  };
  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
  Expression source_;
};

/// A twice-differentiable scalar function with its symbolic gradient and
/// Hessian compiled once.
class Function {
 public:
  Function();
  explicit Function(const Expression& e);

  const Expression& expression() const;
  const Expression& partial(int var) const;

  double value(Point2 x) const;
  /// Non-throwing value; *domain_error set on failure.
  double value(Point2 x, bool* domain_error) const;
  Vec2 gradient(Point2 x) const;
  Sym2 hessian(Point2 x) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace invex2d
