#include <algorithm>
#include <array>

#include "expr_internal.hpp"
#include "invex2d/expr.hpp"

namespace invex2d {

CompiledExpression::CompiledExpression(const Expression& e) : source_(e) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Expression& n) -> void {
    switch (n.op()) {
      case Op::kConst:
      case Op::kVar:
        code_.push_back({n.op(), n.var(), n.value(), false});
        ++depth;
        max_stack_ = std::max(max_stack_, depth);
        return;
      default: break;
    }
    if (is_unary(n.op())) {
      self(self, n.operand());
      code_.push_back({n.op(), 0, 0.0, false});
      return;
    }
    if (n.op() == Op::kPow && n.rhs().is_constant()) {
      if (auto k = detail::integer_exponent(n.rhs().value())) {
        self(self, n.lhs());
        code_.push_back({Op::kPow, *k, 0.0, true});
        return;
      }
    }
    self(self, n.lhs());
    self(self, n.rhs());
    code_.push_back({n.op(), 0, 0.0, false});
    --depth;
  };
  emit(emit, e);
}

double CompiledExpression::eval(Point2 x, bool* domain_error) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> small;
  std::vector<double> big;
  double* stack = small.data();
  if (max_stack_ > kInline) {
    big.resize(max_stack_);
    stack = big.data();
  }
  std::size_t sp = 0;
  bool ok = true;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::kConst: stack[sp++] = in.value; break;
      case Op::kVar: stack[sp++] = in.ivalue == 1 ? x.x1 : x.x2; break;
      case Op::kNeg: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::kAdd: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::kSub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::kMul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::kDiv:
        --sp;
        ok &= stack[sp] != 0.0;
        stack[sp - 1] /= stack[sp];
        break;
      case Op::kPow:
        if (in.int_pow) {
          double& b = stack[sp - 1];
          ok &= !(b == 0.0 && in.ivalue < 0);
          b = detail::ipow(b, in.ivalue);
        } else {
          --sp;
          ok &= detail::apply_binary(Op::kPow, stack[sp - 1], stack[sp],
                                     &stack[sp - 1]);
        }
        break;
      default:
        ok &= detail::apply_unary(in.op, stack[sp - 1], &stack[sp - 1]);
    }
  }
  *domain_error = !ok;
  return code_.empty() ? 0.0 : stack[0];
}

double CompiledExpression::operator()(Point2 x) const {
  bool bad = false;
  const double v = eval(x, &bad);
  if (bad) return evaluate(source_, x);  // throws DomainError
  return v;
}

struct Function::Impl {
  Expression f;
  Expression d[2];
  CompiledExpression cf;
  CompiledExpression cd[2];
  CompiledExpression h11, h12, h22;
};

Function::Function() : Function(Expression()) {}

Function::Function(const Expression& e) {
  auto impl = std::make_shared<Impl>();
  impl->f = e;
  impl->d[0] = differentiate(e, 1);
  impl->d[1] = differentiate(e, 2);
  impl->cf = CompiledExpression(e);
  impl->cd[0] = CompiledExpression(impl->d[0]);
  impl->cd[1] = CompiledExpression(impl->d[1]);
  impl->h11 = CompiledExpression(differentiate(impl->d[0], 1));
  impl->h12 = CompiledExpression(differentiate(impl->d[0], 2));
  impl->h22 = CompiledExpression(differentiate(impl->d[1], 2));
  impl_ = std::move(impl);
}

const Expression& Function::expression() const { return impl_->f; }
const Expression& Function::partial(int var) const {
  return impl_->d[var == 1 ? 0 : 1];
}

double Function::value(Point2 x) const { return impl_->cf(x); }
double Function::value(Point2 x, bool* domain_error) const {
  return impl_->cf.eval(x, domain_error);
}
Vec2 Function::gradient(Point2 x) const {
  return {impl_->cd[0](x), impl_->cd[1](x)};
}
Sym2 Function::hessian(Point2 x) const {
  return {impl_->h11(x), impl_->h12(x), impl_->h22(x)};
}

}  // namespace invex2d
