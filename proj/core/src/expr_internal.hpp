#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "invex2d/expr.hpp"

namespace invex2d {

struct Node {
  Op op = Op::kConst;
  double value = 0.0;
  int var = 0;
  // Leaves keep null children so the shared zero node can be built.
  Expression a{std::shared_ptr<const Node>{}};
  Expression b{std::shared_ptr<const Node>{}};
};

namespace detail {

// Exponents that are integers of modest size are evaluated by repeated
// multiplication so negative bases stay in the domain.
inline std::optional<int> integer_exponent(double e) {
  if (!std::isfinite(e) || e != std::floor(e) || std::fabs(e) > 1024.0) {
    return std::nullopt;
  }
  return static_cast<int>(e);
}

inline double ipow(double base, int n) {
  const bool negative = n < 0;
  unsigned m = static_cast<unsigned>(negative ? -n : n);
  double result = 1.0;
  double factor = base;
  while (m != 0) {
    if (m & 1u) result *= factor;
    factor *= factor;
    m >>= 1;
  }
  return negative ? 1.0 / result : result;
}

// Applies one operation; returns false when the arguments are outside
// its domain.
inline bool apply_unary(Op op, double a, double* out) {
  switch (op) {
    case Op::kNeg: *out = -a; return true;
    case Op::kSin: *out = std::sin(a); return std::isfinite(*out);
    case Op::kCos: *out = std::cos(a); return std::isfinite(*out);
    case Op::kTan: *out = std::tan(a); return std::isfinite(*out);
    case Op::kSqrt: *out = std::sqrt(a); return a >= 0.0;
    case Op::kExp: *out = std::exp(a); return std::isfinite(*out);
    case Op::kLog: *out = std::log(a); return a > 0.0;
    default: return false;
  }
}

inline bool apply_binary(Op op, double a, double b, double* out) {
  switch (op) {
    case Op::kAdd: *out = a + b; return true;
    case Op::kSub: *out = a - b; return true;
    case Op::kMul: *out = a * b; return true;
    case Op::kDiv: *out = a / b; return b != 0.0;
    case Op::kPow:
      if (auto n = integer_exponent(b)) {
        if (a == 0.0 && *n < 0) return false;
        *out = ipow(a, *n);
        return true;
      }
      if (a < 0.0 || (a == 0.0 && b < 0.0)) return false;
      *out = std::pow(a, b);
      return std::isfinite(*out);
    default: return false;
  }
}

}  // namespace detail
}  // namespace invex2d
