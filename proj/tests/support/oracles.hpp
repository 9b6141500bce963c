#pragma once

// Test-only oracles. Nothing here calls into the library's numerics: the
// closures, finite differences, Eigen solves and complex power flows are
// independent re-derivations used to check library output.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "invex2d/opf.hpp"
#include "invex2d/vec2.hpp"

namespace oracle {

using Fn = std::function<double(double, double)>;

struct RandomExpr {
  std::string text;
  Fn fn;
};

// Random smooth expression together with an independent closure. Every
// function used is defined on all of R², so any sample point is valid.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  RandomExpr next(int depth = 4) { return gen(depth); }

 private:
  RandomExpr leaf() {
    std::uniform_int_distribution<int> pick(0, 2);
    switch (pick(rng_)) {
      case 0: return {"x1", [](double a, double) { return a; }};
      case 1: return {"x2", [](double, double b) { return b; }};
      default: {
        std::uniform_int_distribution<int> c(1, 9);
        const double v = c(rng_) / 4.0;
        return {std::to_string(v), [v](double, double) { return v; }};
      }
    }
  }

  RandomExpr gen(int depth) {
    if (depth == 0) return leaf();
    std::uniform_int_distribution<int> pick(0, 9);
    const int k = pick(rng_);
    if (k <= 1) return leaf();
    if (k <= 5) {
      RandomExpr a = gen(depth - 1);
      RandomExpr b = gen(depth - 1);
      switch (k) {
        case 2:
          return {"(" + a.text + " + " + b.text + ")",
                  [fa = a.fn, fb = b.fn](double x, double y) { return fa(x, y) + fb(x, y); }};
        case 3:
          return {"(" + a.text + " - " + b.text + ")",
                  [fa = a.fn, fb = b.fn](double x, double y) { return fa(x, y) - fb(x, y); }};
        case 4:
          return {"(" + a.text + ")*(" + b.text + ")",
                  [fa = a.fn, fb = b.fn](double x, double y) { return fa(x, y) * fb(x, y); }};
        default:
          return {"(" + a.text + ")/(2 + sin(" + b.text + "))",
                  [fa = a.fn, fb = b.fn](double x, double y) {
                    return fa(x, y) / (2.0 + std::sin(fb(x, y)));
                  }};
      }
    }
    RandomExpr a = gen(depth - 1);
    switch (k) {
      case 6:
        return {"sin(" + a.text + ")",
                [fa = a.fn](double x, double y) { return std::sin(fa(x, y)); }};
      case 7:
        return {"cos(" + a.text + ")",
                [fa = a.fn](double x, double y) { return std::cos(fa(x, y)); }};
      case 8:
        return {"(" + a.text + ")^2",
                [fa = a.fn](double x, double y) { const double v = fa(x, y); return v * v; }};
      default:
        return {"sqrt(1 + (" + a.text + ")^2)",
                [fa = a.fn](double x, double y) {
                  const double v = fa(x, y);
                  return std::sqrt(1.0 + v * v);
                }};
    }
  }

  std::mt19937_64 rng_;
};

inline invex2d::Vec2 fd_gradient(const Fn& f, double x, double y, double h = 1e-6) {
  return {(f(x + h, y) - f(x - h, y)) / (2 * h), (f(x, y + h) - f(x, y - h)) / (2 * h)};
}

// Solves a·u + b·v = rhs for (u, v) with Eigen's pivoted LU.
inline std::pair<double, double> solve_columns(invex2d::Vec2 a, invex2d::Vec2 b,
                                               invex2d::Vec2 rhs) {
  Eigen::Matrix2d m;
  m << a.x1, b.x1, a.x2, b.x2;
  const Eigen::Vector2d s = m.fullPivLu().solve(Eigen::Vector2d(rhs.x1, rhs.x2));
  return {s(0), s(1)};
}

// Points on {g = 0}: sign changes along the edges of an n×n grid, each
// refined by bisection on the closure.
inline std::vector<invex2d::Point2> curve_points(const Fn& g, double lo1, double hi1,
                                                 double lo2, double hi2, int n) {
  std::vector<invex2d::Point2> out;
  const double h1 = (hi1 - lo1) / n;
  const double h2 = (hi2 - lo2) / n;
  auto refine = [&](double ax, double ay, double bx, double by) {
    double ga = g(ax, ay);
    for (int it = 0; it < 60; ++it) {
      const double mx = 0.5 * (ax + bx);
      const double my = 0.5 * (ay + by);
      const double gm = g(mx, my);
      if ((gm > 0) == (ga > 0)) {
        ax = mx;
        ay = my;
        ga = gm;
      } else {
        bx = mx;
        by = my;
      }
    }
    out.push_back({0.5 * (ax + bx), 0.5 * (ay + by)});
  };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double x = lo1 + i * h1;
      const double y = lo2 + j * h2;
      const double v = g(x, y);
      if (i < n && (v > 0) != (g(x + h1, y) > 0)) refine(x, y, x + h1, y);
      if (j < n && (v > 0) != (g(x, y + h2) > 0)) refine(x, y, x, y + h2);
    }
  }
  return out;
}

// Local extrema of f along a star-shaped closed curve, ordering the points
// by angle around their centroid.
inline std::vector<invex2d::Point2> curve_extrema(const Fn& f,
                                                  std::vector<invex2d::Point2> pts) {
  std::vector<invex2d::Point2> out;
  if (pts.size() < 8) return out;
  double cx = 0, cy = 0;
  for (auto& q : pts) {
    cx += q.x1;
    cy += q.x2;
  }
  cx /= pts.size();
  cy /= pts.size();
  std::sort(pts.begin(), pts.end(), [&](auto& a, auto& b) {
    return std::atan2(a.x2 - cy, a.x1 - cx) < std::atan2(b.x2 - cy, b.x1 - cx);
  });
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = f(pts[(k + n - 1) % n].x1, pts[(k + n - 1) % n].x2);
    const double b = f(pts[k].x1, pts[k].x2);
    const double c = f(pts[(k + 1) % n].x1, pts[(k + 1) % n].x2);
    if ((b < a && b <= c) || (b > a && b >= c)) out.push_back(pts[k]);
  }
  return out;
}

// Line flows from complex voltages: V1 = √w, V2 = conj(W)/V1 with
// W = w^R + i·w^I, S_ij = V_i·conj(Y·(V_i − V_j)).
struct ComplexFlows {
  double p12, q12, p21, q21;
};

inline ComplexFlows complex_flows(const invex2d::opf::LineParams& q, double wr, double wi) {
  using C = std::complex<double>;
  const C y(q.g, q.b);
  const C v1(std::sqrt(q.w), 0.0);
  const C v2 = std::conj(C(wr, wi)) / v1;
  const C s12 = v1 * std::conj(y * (v1 - v2));
  const C s21 = v2 * std::conj(y * (v2 - v1));
  return {s12.real(), s12.imag(), s21.real(), s21.imag()};
}

// Feasibility of the one-line model evaluated from complex flows. Used to
// cross-check the library instance independently of its expressions.
inline bool opf_feasible(const invex2d::opf::LineParams& q, double wr, double wi,
                         double tol = 1e-8) {
  const ComplexFlows fl = complex_flows(q, wr, wi);
  const double v2sq = (wr * wr + wi * wi) / q.w;
  auto in = [&](double v, double lo, double hi) {
    return (!std::isfinite(lo) || v >= lo - tol) && (!std::isfinite(hi) || v <= hi + tol);
  };
  const double ang = std::atan2(wi, wr);
  return wr > 0 && ang >= q.theta_lo - 1e-12 && ang <= q.theta_hi + 1e-12 &&
         in(v2sq, q.v_lo * q.v_lo, q.v_hi * q.v_hi) &&
         fl.p12 * fl.p12 + fl.q12 * fl.q12 <= q.s_u + tol &&
         fl.p21 * fl.p21 + fl.q21 * fl.q21 <= q.s_u + tol && in(fl.p12, q.p1_lo, q.p1_hi) &&
         in(fl.q12, q.q1_lo, q.q1_hi) && in(fl.p21, q.p2_lo, q.p2_hi) &&
         in(fl.q21, q.q2_lo, q.q2_hi);
}

// Random LineParams inside the admissible windows. Injection lower bounds on
// bus 2 are drawn where the p/q lower-bound curves are nonempty.
inline invex2d::opf::LineParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  invex2d::opf::LineParams q;
  q.g = 0.5 + 2.5 * u(rng);
  q.b = -1.0 - 9.0 * u(rng);
  q.v_lo = 0.95 + 0.04 * u(rng);
  q.v_hi = q.v_lo + 0.01 + (1.05 - q.v_lo - 0.01) * u(rng);
  q.w = q.v_lo * q.v_lo + (q.v_hi * q.v_hi - q.v_lo * q.v_lo) * u(rng);
  q.s_u = 0.5 + 1.5 * u(rng);
  q.c1 = 0.2 + 1.8 * u(rng);
  q.c2 = 0.05 + 1.0 * u(rng);
  q.theta_lo = -std::numbers::pi / 6.0 * (0.5 + 0.5 * u(rng));
  q.theta_hi = std::numbers::pi / 6.0 * (0.5 + 0.5 * u(rng));
  const double pmin = -q.w * q.y_abs2() / (4.0 * q.g);
  q.p2_lo = pmin * u(rng);
  const double qmin = -(std::fabs(q.b) * q.w / 4.0) * (1.0 + q.g * q.g / (q.b * q.b));
  q.q2_lo = qmin * u(rng);
  return q;
}

}  // namespace oracle
