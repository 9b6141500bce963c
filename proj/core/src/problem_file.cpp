#include <charconv>
#include <optional>
#include <string>

#include "invex2d/error.hpp"
#include "invex2d/problem.hpp"

namespace invex2d {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Line {
  std::string_view text;
  std::size_t number;
  std::size_t offset;  // of `text` within the raw line
};

[[noreturn]] void fail(const Line& line, std::size_t pos,
                       const std::string& what) {
  throw ParseError("line " + std::to_string(line.number) + ": " + what,
                   line.offset + pos, line.number);
}

Expression parse_at(const Line& line, std::string_view text,
                    std::size_t pos) {
  try {
    return parse_expression(text);
  } catch (const ParseError& e) {
    fail(line, pos + e.position(), e.what());
  }
}

double parse_bound(const Line& line, std::string_view s, std::size_t pos) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(line, pos, "malformed bound '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Problem2D load_problem(std::string_view document) {
  std::optional<std::pair<double, double>> range[2];
  std::optional<Expression> objective;
  std::vector<ConstraintSpec> constraints;

  std::size_t number = 0;
  while (!document.empty()) {
    ++number;
    const auto nl = document.find('\n');
    std::string_view raw = document.substr(0, nl);
    document = nl == std::string_view::npos ? std::string_view{}
                                            : document.substr(nl + 1);
    std::string_view body = raw.substr(0, raw.find('#'));
    const auto lead = body.find_first_not_of(" \t\r");
    if (lead == std::string_view::npos) continue;
    Line line{trim(body), number, lead};
    std::string_view text = line.text;

    const auto space = text.find_first_of(" \t");
    const std::string_view keyword = text.substr(0, space);
    const std::size_t rest_pos =
        space == std::string_view::npos ? text.size() : space + 1;
    const std::string_view rest = text.substr(rest_pos);

    if (keyword == "var") {
      // var x1 in [lo, hi]
      const std::string_view r = trim(rest);
      int idx = 0;
      if (r.substr(0, 2) == "x1") idx = 1;
      if (r.substr(0, 2) == "x2") idx = 2;
      if (idx == 0) fail(line, rest_pos, "expected variable x1 or x2");
      const auto open = text.find('[');
      const auto comma = text.find(',', open);
      const auto close = text.find(']', comma);
      const auto in = text.find(" in ");
      if (in == std::string_view::npos || open == std::string_view::npos ||
          comma == std::string_view::npos || close == std::string_view::npos ||
          !trim(text.substr(close + 1)).empty()) {
        fail(line, rest_pos, "expected 'var xN in [lo, hi]'");
      }
      if (range[idx - 1]) fail(line, 0, "variable declared twice");
      const double lo =
          parse_bound(line, text.substr(open + 1, comma - open - 1), open + 1);
      const double hi = parse_bound(
          line, text.substr(comma + 1, close - comma - 1), comma + 1);
      range[idx - 1] = {lo, hi};
    } else if (keyword == "maximize") {
      if (objective) fail(line, 0, "more than one maximize line");
      objective = parse_at(line, rest, rest_pos);
    } else if (keyword == "constraint") {
      // constraint name: expr <= 0
      const auto colon = rest.find(':');
      if (colon == std::string_view::npos) {
        fail(line, rest_pos, "expected ':' after constraint name");
      }
      const std::string_view name = trim(rest.substr(0, colon));
      if (name.empty() ||
          name.find_first_of(" \t") != std::string_view::npos) {
        fail(line, rest_pos, "invalid constraint name");
      }
      const std::size_t body_pos = rest_pos + colon + 1;
      const std::string_view expr_text = rest.substr(colon + 1);
      const auto le = expr_text.rfind("<=");
      if (le == std::string_view::npos) {
        fail(line, body_pos, "expected '<= 0'");
      }
      const Expression rhs =
          parse_at(line, expr_text.substr(le + 2), body_pos + le + 2);
      if (!fold_constants(rhs).is_constant(0.0)) {
        fail(line, body_pos + le + 2, "right-hand side must be 0");
      }
      constraints.push_back(
          {std::string(name),
           parse_at(line, expr_text.substr(0, le), body_pos), false});
    } else {
      fail(line, 0, "unknown directive '" + std::string(keyword) + "'");
    }
  }

  const Line none{{}, number, 0};
  if (!objective) fail(none, 0, "missing 'maximize' line");
  if (!range[0] || !range[1]) {
    fail(none, 0, "both 'var x1' and 'var x2' lines are required");
  }
  const Box2 box{range[0]->first, range[0]->second, range[1]->first,
                 range[1]->second};
  return Problem2D(*objective, std::move(constraints), box);
}

std::string format_problem(const Problem2D& p) {
  auto num = [](double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  const Box2& b = p.box();
  std::string out;
  out += "var x1 in [" + num(b.lo1) + ", " + num(b.hi1) + "]\n";
  out += "var x2 in [" + num(b.lo2) + ", " + num(b.hi2) + "]\n";
  out += "maximize " + to_string(p.objective_expr()) + "\n";
  for (std::size_t i = 0; i < p.user_constraint_count(); ++i) {
    const auto& c = p.constraint(i);
    out += "constraint " + c.name + ": " + to_string(c.expr) + " <= 0\n";
  }
  return out;
}

}  // namespace invex2d
