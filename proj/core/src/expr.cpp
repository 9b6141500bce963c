#include "invex2d/expr.hpp"

#include <charconv>
#include <cmath>

#include "expr_internal.hpp"
#include "invex2d/error.hpp"

namespace invex2d {

bool is_unary(Op op) { return op >= Op::kNeg && op <= Op::kLog; }
bool is_binary(Op op) { return op >= Op::kAdd; }

std::string_view function_name(Op op) {
  switch (op) {
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kTan: return "tan";
    case Op::kSqrt: return "sqrt";
    case Op::kExp: return "exp";
    case Op::kLog: return "log";
    default: return {};
  }
}

namespace {

const std::shared_ptr<const Node>& zero_node() {
  static const auto node = std::make_shared<const Node>();
  return node;
}

}  // namespace

Expression::Expression() : node_(zero_node()) {}
Expression::Expression(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(int index) {
  if (index != 1 && index != 2) {
    throw PreconditionError("variable index must be 1 or 2");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->var = index;
  return Expression(std::move(n));
}

Expression Expression::unary(Op op, Expression operand) {
  if (!is_unary(op)) throw PreconditionError("not a unary operation");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(operand);
  return Expression(std::move(n));
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
  if (!is_binary(op)) throw PreconditionError("not a binary operation");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expression(std::move(n));
}

Op Expression::op() const { return node_->op; }
double Expression::value() const { return node_->value; }
int Expression::var() const { return node_->var; }
const Expression& Expression::operand() const { return node_->a; }
const Expression& Expression::lhs() const { return node_->a; }
const Expression& Expression::rhs() const { return node_->b; }

std::size_t Expression::size() const {
  if (is_unary(op())) return 1 + operand().size();
  if (is_binary(op())) return 1 + lhs().size() + rhs().size();
  return 1;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::kConst: return a.value() == b.value();
    case Op::kVar: return a.var() == b.var();
    default:
      if (is_unary(a.op())) return a.operand() == b.operand();
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression::binary(Op::kAdd, a, b);
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::binary(Op::kSub, a, b);
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::binary(Op::kMul, a, b);
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::binary(Op::kDiv, a, b);
}
Expression operator-(const Expression& a) {
  return Expression::unary(Op::kNeg, a);
}
Expression operator+(const Expression& a, double b) {
  return a + Expression::constant(b);
}
Expression operator+(double a, const Expression& b) {
  return Expression::constant(a) + b;
}
Expression operator-(const Expression& a, double b) {
  return a - Expression::constant(b);
}
Expression operator-(double a, const Expression& b) {
  return Expression::constant(a) - b;
}
Expression operator*(double a, const Expression& b) {
  return Expression::constant(a) * b;
}
Expression operator*(const Expression& a, double b) {
  return a * Expression::constant(b);
}
Expression operator/(const Expression& a, double b) {
  return a / Expression::constant(b);
}
Expression pow(const Expression& base, const Expression& exponent) {
  return Expression::binary(Op::kPow, base, exponent);
}
Expression pow(const Expression& base, double exponent) {
  return pow(base, Expression::constant(exponent));
}
Expression sin(const Expression& e) { return Expression::unary(Op::kSin, e); }
Expression cos(const Expression& e) { return Expression::unary(Op::kCos, e); }
Expression tan(const Expression& e) { return Expression::unary(Op::kTan, e); }
Expression sqrt(const Expression& e) {
  return Expression::unary(Op::kSqrt, e);
}
Expression exp(const Expression& e) { return Expression::unary(Op::kExp, e); }
Expression log(const Expression& e) { return Expression::unary(Op::kLog, e); }

double evaluate(const Expression& e, Point2 x) {
  double out = 0.0;
  bool ok = true;
  switch (e.op()) {
    case Op::kConst: return e.value();
    case Op::kVar: return e.var() == 1 ? x.x1 : x.x2;
    default:
      if (is_unary(e.op())) {
        ok = detail::apply_unary(e.op(), evaluate(e.operand(), x), &out);
      } else {
        const double a = evaluate(e.lhs(), x);
        const double b = evaluate(e.rhs(), x);
        ok = detail::apply_binary(e.op(), a, b, &out);
      }
  }
  if (!ok) throw DomainError("domain error", to_string(e));
  return out;
}

namespace {

// Binding strength used by the printer; higher binds tighter.
enum Level { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

Level level_of(const Expression& e) {
  switch (e.op()) {
    case Op::kConst: return e.value() < 0.0 || std::signbit(e.value()) ? kUnary
                                                                       : kAtom;
    case Op::kVar: return kAtom;
    case Op::kNeg: return kUnary;
    case Op::kAdd:
    case Op::kSub: return kSum;
    case Op::kMul:
    case Op::kDiv: return kProduct;
    case Op::kPow: return kPower;
    default: return kAtom;  // function call
  }
}

void print(const Expression& e, int min_level, std::string& out);

void print_number(double v, std::string& out) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void print(const Expression& e, int min_level, std::string& out) {
  const Level lvl = level_of(e);
  const bool paren = lvl < min_level;
  if (paren) out += '(';
  switch (e.op()) {
    case Op::kConst: print_number(e.value(), out); break;
    case Op::kVar: out += e.var() == 1 ? "x1" : "x2"; break;
    case Op::kNeg:
      out += '-';
      print(e.operand(), kUnary, out);
      break;
    case Op::kAdd:
      print(e.lhs(), kSum, out);
      if (e.rhs().op() == Op::kNeg) {
        out += " - ";
        print(e.rhs().operand(), kProduct, out);
      } else {
        out += " + ";
        print(e.rhs(), kProduct, out);
      }
      break;
    case Op::kSub:
      print(e.lhs(), kSum, out);
      out += " - ";
      print(e.rhs(), kProduct, out);
      break;
    case Op::kMul:
    case Op::kDiv:
      print(e.lhs(), kProduct, out);
      out += e.op() == Op::kMul ? '*' : '/';
      print(e.rhs(), kUnary, out);
      break;
    case Op::kPow:
      print(e.lhs(), kAtom, out);
      out += '^';
      print(e.rhs(), kUnary, out);
      break;
    default:
      out += function_name(e.op());
      out += '(';
      print(e.operand(), kSum, out);
      out += ')';
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const Expression& e) {
  std::string out;
  print(e, kSum, out);
  return out;
}

bool is_affine(const Expression& e) {
  for (int i = 1; i <= 2; ++i) {
    const Expression d = differentiate(e, i);
    for (int j = 1; j <= 2; ++j) {
      if (!differentiate(d, j).is_constant(0.0)) return false;
    }
  }
  return true;
}

}  // namespace invex2d
