#include "invex2d/level_curve.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "invex2d/error.hpp"
#include "invex2d/geometry.hpp"
#include "numerics.hpp"

namespace invex2d {
namespace {

// Coarse spatial hash of traced points, used to skip seeds on curves that
// are already traced.
class PointIndex {
 public:
  explicit PointIndex(double cell) : cell_(cell) {}

  void add(Point2 x) { cells_[key(cell_of(x.x1), cell_of(x.x2))].push_back(x); }

  bool near(Point2 x, double r) const {
    const long long i = cell_of(x.x1);
    const long long j = cell_of(x.x2);
    for (long long di = -1; di <= 1; ++di) {
      for (long long dj = -1; dj <= 1; ++dj) {
        auto it = cells_.find(key(i + di, j + dj));
        if (it == cells_.end()) continue;
        for (const Point2& y : it->second) {
          if (distance(x, y) <= r) return true;
        }
      }
    }
    return false;
  }

 private:
  long long cell_of(double v) const {
    return static_cast<long long>(std::floor(v / cell_));
  }
  static long long key(long long i, long long j) {
    return i * 1000003LL + j;
  }
  double cell_;
  std::unordered_map<long long, std::vector<Point2>> cells_;
};

struct HalfTrace {
  std::vector<Point2> points;  // excludes the seed
  bool closed = false;
  bool truncated = false;
};

HalfTrace trace_half(const Function& g, const Box2& bounds, Point2 seed,
                     double h, double direction, std::size_t max_steps) {
  HalfTrace out;
  Point2 x = seed;
  double travelled = 0.0;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const Vec2 grad = g.gradient(x);
    const double gn = norm(grad);
    if (!(gn >= kGradientTolerance)) {
      throw LicqError("degenerate gradient on level curve");
    }
    const Vec2 T = direction * tangent_of_gradient(grad) / gn;
    const Vec2 n = grad / gn;
    if (direction > 0.0 && travelled > 2.0 * h && distance(x, seed) <= h &&
        dot(seed - x, T) > 0.0) {
      out.closed = true;
      return out;
    }
    std::optional<Point2> y;
    for (double s = h; s >= h * 1e-6; s *= 0.5) {
      const Point2 y0 = x + s * T;
      y = detail::project_along(g, y0, n, 1e-12, 50);
      if (y && distance(*y, y0) <= s && dot(*y - x, T) > 0.0) break;
      y.reset();
    }
    if (!y) throw TraceError("level-curve step control failed");
    if (!bounds.contains(*y)) {
      // Clip to the box edge by bisection on the chord.
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (bounds.contains(x + mid * (*y - x))) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.points.push_back(x + lo * (*y - x));
      out.truncated = true;
      return out;
    }
    travelled += distance(x, *y);
    x = *y;
    out.points.push_back(x);
  }
  throw TraceError("level curve did not close or leave the box");
}

}  // namespace

std::vector<CurveBranch> trace_level_curve(const Function& g,
                                           const Box2& bounds,
                                           const LevelCurveOptions& opt) {
  const double h = opt.step > 0.0 ? opt.step : bounds.diagonal() / 4000.0;
  const std::size_t max_steps =
      static_cast<std::size_t>(std::ceil(20.0 * bounds.perimeter() / h));
  const int n = opt.seed_grid;

  std::vector<Point2> seeds;
  for (int axis = 0; axis < 2; ++axis) {
    for (int k = 0; k <= n; ++k) {
      auto at = [&](double u) {
        const double line = double(k) / n;
        return axis == 0 ? Point2{bounds.lo1 + line * bounds.width(),
                                  bounds.lo2 + u * bounds.height()}
                         : Point2{bounds.lo1 + u * bounds.width(),
                                  bounds.lo2 + line * bounds.height()};
      };
      bool prev_ok = false;
      double prev = 0.0;
      for (int m = 0; m <= n; ++m) {
        const double u = double(m) / n;
        bool bad = false;
        const double v = g.value(at(u), &bad);
        if (bad || !std::isfinite(v)) {
          prev_ok = false;
          continue;
        }
        if (prev_ok && (prev <= 0.0) != (v <= 0.0)) {
          double lo = double(m - 1) / n, hi = u;
          const bool lo_neg = prev <= 0.0;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            bool b2 = false;
            const double gv = g.value(at(mid), &b2);
            if (b2) break;
            ((gv <= 0.0) == lo_neg ? lo : hi) = mid;
          }
          Point2 y = at(0.5 * (lo + hi));
          if (auto pr = detail::project_gradient(g, y, 1e-12, 30);
              pr && distance(*pr, y) <= bounds.diagonal() / n) {
            y = *pr;
          }
          if (bounds.contains(y) && std::fabs(g.value(y)) <= 1e-9) {
            seeds.push_back(y);
          }
        }
        prev = v;
        prev_ok = true;
      }
    }
  }

  std::vector<CurveBranch> branches;
  PointIndex index(2.0 * h);
  for (const Point2& seed : seeds) {
    if (index.near(seed, 2.0 * h)) continue;
    CurveBranch b;
    HalfTrace fwd = trace_half(g, bounds, seed, h, 1.0, max_steps);
    if (fwd.closed) {
      b.closed = true;
      b.points.push_back(seed);
      b.points.insert(b.points.end(), fwd.points.begin(), fwd.points.end());
    } else {
      HalfTrace bwd = trace_half(g, bounds, seed, h, -1.0, max_steps);
      b.points.assign(bwd.points.rbegin(), bwd.points.rend());
      b.points.push_back(seed);
      b.points.insert(b.points.end(), fwd.points.begin(), fwd.points.end());
      b.truncated_front = bwd.truncated;
      b.truncated_back = fwd.truncated;
    }
    for (const Point2& x : b.points) index.add(x);
    branches.push_back(std::move(b));
  }
  return branches;
}

}  // namespace invex2d
