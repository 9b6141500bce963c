#include <cctype>
#include <charconv>
#include <string>

#include "invex2d/error.hpp"
#include "invex2d/expr.hpp"

namespace invex2d {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse() {
    Expression e = sum();
    skip_space();
    if (pos_ != text_.size()) {
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_), pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression sum() {
    Expression e = product();
    for (;;) {
      if (accept('+')) {
        e = e + product();
      } else if (accept('-')) {
        e = e + (-product());
      } else {
        return e;
      }
    }
  }

  Expression product() {
    Expression e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expression primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return identifier();
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expression number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expression::constant(v);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x1") return x1();
    if (name == "x2") return x2();
    for (Op op : {Op::kSin, Op::kCos, Op::kTan, Op::kSqrt, Op::kExp,
                  Op::kLog}) {
      if (name == function_name(op)) {
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        Expression arg = sum();
        if (!accept(')')) fail("expected ')'");
        return Expression::unary(op, arg);
      }
    }
    pos_ = start;
    fail("unknown identifier \"" + std::string(name) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) {
  return Parser(text).parse();
}

}  // namespace invex2d
