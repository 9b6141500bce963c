#include <cmath>

#include "expr_internal.hpp"
#include "invex2d/error.hpp"
#include "invex2d/expr.hpp"

namespace invex2d {
namespace {

using E = Expression;

E c(double v) { return E::constant(v); }

// Local simplifications applied to a node whose children are already folded.
E make_unary(Op op, const E& a);
E make_binary(Op op, const E& a, const E& b);

E make_unary(Op op, const E& a) {
  if (a.is_constant()) {
    double out = 0.0;
    if (detail::apply_unary(op, a.value(), &out)) {
      return c(out == 0.0 ? 0.0 : out);
    }
  }
  if (op == Op::kNeg && a.op() == Op::kNeg) return a.operand();
  return E::unary(op, a);
}

E make_binary(Op op, const E& a, const E& b) {
  if (a.is_constant() && b.is_constant()) {
    double out = 0.0;
    if (detail::apply_binary(op, a.value(), b.value(), &out)) {
      return c(out == 0.0 ? 0.0 : out);
    }
  }
  switch (op) {
    case Op::kAdd:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      if (b.op() == Op::kNeg) return make_binary(Op::kSub, a, b.operand());
      if (b.is_constant() && b.value() < 0.0) {
        return make_binary(Op::kSub, a, c(-b.value()));
      }
      break;
    case Op::kSub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return make_unary(Op::kNeg, b);
      if (b.op() == Op::kNeg) return make_binary(Op::kAdd, a, b.operand());
      if (b.is_constant() && b.value() < 0.0) {
        return make_binary(Op::kAdd, a, c(-b.value()));
      }
      break;
    case Op::kMul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return c(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(-1.0)) return make_unary(Op::kNeg, b);
      if (b.is_constant(-1.0)) return make_unary(Op::kNeg, a);
      break;
    case Op::kDiv:
      if (a.is_constant(0.0)) return c(0.0);
      if (b.is_constant(1.0)) return a;
      if (b.is_constant(-1.0)) return make_unary(Op::kNeg, a);
      break;
    case Op::kPow:
      if (b.is_constant(1.0)) return a;
      if (b.is_constant(0.0)) return c(1.0);
      break;
    default: break;
  }
  return E::binary(op, a, b);
}

E neg(const E& a) { return make_unary(Op::kNeg, a); }
E add(const E& a, const E& b) { return make_binary(Op::kAdd, a, b); }
E sub(const E& a, const E& b) { return make_binary(Op::kSub, a, b); }
E mul(const E& a, const E& b) { return make_binary(Op::kMul, a, b); }
E div(const E& a, const E& b) { return make_binary(Op::kDiv, a, b); }
E pw(const E& a, const E& b) { return make_binary(Op::kPow, a, b); }

// Derivative of a folded expression; every result is built through the
// folding constructors, so the output is folded as well.
E diff(const E& e, int var) {
  switch (e.op()) {
    case Op::kConst: return c(0.0);
    case Op::kVar: return c(e.var() == var ? 1.0 : 0.0);
    default: break;
  }
  if (is_unary(e.op())) {
    const E& u = e.operand();
    const E du = diff(u, var);
    if (du.is_constant(0.0)) return c(0.0);
    switch (e.op()) {
      case Op::kNeg: return neg(du);
      case Op::kSin: return mul(du, make_unary(Op::kCos, u));
      case Op::kCos: return neg(mul(du, make_unary(Op::kSin, u)));
      case Op::kTan: return div(du, pw(make_unary(Op::kCos, u), c(2.0)));
      case Op::kSqrt: return div(du, mul(c(2.0), make_unary(Op::kSqrt, u)));
      case Op::kExp: return mul(du, make_unary(Op::kExp, u));
      case Op::kLog: return div(du, u);
      default: break;
    }
  }
  const E& u = e.lhs();
  const E& v = e.rhs();
  const E du = diff(u, var);
  const E dv = diff(v, var);
  switch (e.op()) {
    case Op::kAdd: return add(du, dv);
    case Op::kSub: return sub(du, dv);
    case Op::kMul: return add(mul(du, v), mul(u, dv));
    case Op::kDiv:
      if (dv.is_constant(0.0)) return div(du, v);
      return div(sub(mul(du, v), mul(u, dv)), pw(v, c(2.0)));
    case Op::kPow: {
      if (v.is_constant()) {
        if (du.is_constant(0.0)) return c(0.0);
        const double n = v.value();
        return mul(du, mul(c(n), pw(u, c(n - 1.0))));
      }
      // d(u^v) = u^v * (v' log u + v u'/u)
      const E term_v = mul(dv, make_unary(Op::kLog, u));
      const E term_u = div(mul(v, du), u);
      return mul(pw(u, v), add(term_v, term_u));
    }
    default: break;
  }
  throw Error("unreachable expression node");
}

}  // namespace

Expression fold_constants(const Expression& e) {
  if (is_unary(e.op())) return make_unary(e.op(), fold_constants(e.operand()));
  if (is_binary(e.op())) {
    return make_binary(e.op(), fold_constants(e.lhs()),
                       fold_constants(e.rhs()));
  }
  if (e.is_constant() && e.value() == 0.0) return c(0.0);
  return e;
}

Expression differentiate(const Expression& e, int var) {
  if (var != 1 && var != 2) {
    throw PreconditionError("variable index must be 1 or 2");
  }
  return diff(fold_constants(e), var);
}

}  // namespace invex2d
