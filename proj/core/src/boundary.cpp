#include "invex2d/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "invex2d/error.hpp"
#include "invex2d/geometry.hpp"
#include "numerics.hpp"

namespace invex2d {

double BoundaryPath::closure_gap() const {
  if (nodes.empty()) return 0.0;
  return distance(nodes.front().point, nodes.back().point);
}

std::size_t BoundaryPath::corner_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(),
      [](const BoundaryNode& n) { return n.is_corner; }));
}

double corner_check(const Problem2D& p, const BoundaryNode& corner) {
  const Vec2 gin = p.constraint(corner.incoming).fn.gradient(corner.point);
  const Vec2 gout = p.constraint(corner.outgoing).fn.gradient(corner.point);
  return cross(gin, gout);
}

namespace {

// Constraint values above this count as crossed during a step.
constexpr double kEventTol = 1e-10;

Vec2 unit_tangent(const Function& g, Point2 x, double grad_tol) {
  const Vec2 grad = g.gradient(x);
  const double n = norm(grad);
  if (!(n >= grad_tol)) {
    throw LicqError("degenerate constraint gradient at (" +
                    std::to_string(x.x1) + ", " + std::to_string(x.x2) + ")");
  }
  return tangent_of_gradient(grad) / n;
}

class Tracer {
 public:
  Tracer(const Problem2D& p, const TraceOptions& opt) : p_(p), opt_(opt) {
    h_ = opt.step > 0.0 ? opt.step : 1e-2 * p.box().diagonal();
    max_steps_ = opt.max_steps != 0
                     ? opt.max_steps
                     : static_cast<std::size_t>(
                           std::ceil(10.0 * p.box().perimeter() / h_));
  }

  BoundaryPath run(Point2 start) {
    init(start);
    Point2 x = path_.nodes.front().point;
    std::size_t a = path_.nodes.front().active;
    double travelled = 0.0;
    for (std::size_t steps = 0;; ++steps) {
      if (steps > max_steps_) {
        throw TraceError("boundary trace did not close within " +
                         std::to_string(max_steps_) + " steps");
      }
      const Vec2 T = unit_tangent(fn(a), x, grad_tol());
      if (travelled > 2.0 * h_ && a == start_active_ &&
          distance(x, start_) < h_ * (1.0 - 1e-6) &&
          dot(start_ - x, T) >= 0.0) {
        return finish(travelled + distance(x, start_));
      }
      // When the start sits exactly one step ahead, a half step keeps the
      // closing chord strictly shorter than the step.
      double s = h_;
      if (travelled > 2.0 * h_ && dot(start_ - x, T) > 0.0 &&
          std::fabs(distance(x, start_) - h_) <= 1e-6 * h_) {
        s = 0.5 * h_;
      }
      auto next = advance(x, a, T, s);
      travelled += distance(x, next.point);
      x = next.point;
      if (next.is_corner) {
        if (travelled > 2.0 * h_ && distance(x, start_) <= 1e-3 * h_) {
          return finish(travelled);
        }
        next.t = travelled;
        a = next.active;
        // A step can land exactly on the corner; keep only the corner node.
        if (path_.nodes.size() > 1 && !path_.nodes.back().is_corner &&
            distance(path_.nodes.back().point, x) <= 1e-9 * h_) {
          path_.nodes.pop_back();
        }
        path_.nodes.push_back(next);
      } else {
        next.t = travelled;
        path_.nodes.push_back(next);
      }
    }
  }

 private:
  const Function& fn(std::size_t i) const { return p_.constraint(i).fn; }
  double grad_tol() const { return p_.tolerances().gradient; }

  BoundaryPath finish(double length) {
    if (path_.nodes.size() > 1 &&
        distance(path_.nodes.back().point, start_) <= 1e-9 * h_) {
      path_.nodes.pop_back();
    }
    path_.closed = true;
    path_.length = length;
    return std::move(path_);
  }

  void init(Point2 start) {
    const double act = p_.tolerances().active;
    if (max_constraint(p_, start) > act) {
      throw PreconditionError("trace start is infeasible");
    }
    const ActiveSet active = active_set(p_, start);
    if (active.empty()) {
      throw PreconditionError("trace start is not on the boundary");
    }
    // Follow the active constraint whose positive direction keeps every
    // other active constraint from increasing.
    std::optional<std::size_t> chosen;
    std::optional<std::size_t> left;
    for (std::size_t i : active.indices) {
      const Vec2 T = unit_tangent(fn(i), start, grad_tol());
      bool ok = true;
      std::optional<std::size_t> leaving;
      for (std::size_t k : active.indices) {
        if (k == i) continue;
        const Vec2 gk = fn(k).gradient(start);
        const double d = dot(gk, T);
        if (d > 1e-12 * norm(gk)) ok = false;
        if (d < -1e-6 * norm(gk)) leaving = k;
      }
      if (ok) {
        chosen = i;
        left = leaving;
        break;
      }
    }
    if (!chosen) throw TraceError("no admissible direction at trace start");

    BoundaryNode node;
    node.active = *chosen;
    Point2 x = start;
    std::optional<Point2> polished;
    if (left) {
      polished = detail::polish_intersection(fn(*chosen), fn(*left), start,
                                             1e-12, opt_.max_newton);
    }
    if (polished && distance(*polished, start) <= act * 10.0 + 1e-9) {
      x = *polished;
      node.is_corner = true;
      node.incoming = *left;
      node.outgoing = *chosen;
    } else {
      auto proj = detail::project_gradient(fn(*chosen), start,
                                           opt_.newton_tol, opt_.max_newton);
      if (!proj) throw TraceError("could not project trace start");
      x = *proj;
    }
    node.point = x;
    path_.nodes.clear();
    path_.nodes.push_back(node);
    path_.step = h_;
    start_ = x;
    start_active_ = *chosen;
  }

  std::optional<Point2> corrected(Point2 x, std::size_t a, Vec2 T, Vec2 n,
                                  double s) const {
    const Point2 y0 = x + s * T;
    auto y = detail::project_along(fn(a), y0, n, opt_.newton_tol,
                                   opt_.max_newton);
    if (!y) return std::nullopt;
    if (distance(*y, y0) > s || dot(*y - x, T) <= 0.0) return std::nullopt;
    return y;
  }

  BoundaryNode advance(Point2 x, std::size_t a, Vec2 T, double s) {
    const Vec2 n = tangent_of_gradient(T) * -1.0;  // unit ∇g_a direction
    for (int attempt = 0; attempt <= opt_.max_halvings; ++attempt, s *= 0.5) {
      auto y = corrected(x, a, T, n, s);
      if (!y) continue;
      std::vector<std::size_t> violated;
      for (std::size_t j = 0; j < p_.constraints().size(); ++j) {
        if (j != a && fn(j).value(*y) > kEventTol) violated.push_back(j);
      }
      if (violated.empty()) {
        BoundaryNode node;
        node.point = *y;
        node.active = a;
        return node;
      }
      if (violated.size() == 1) return corner(x, a, violated[0], T, n, s);
    }
    throw TraceError("step control failed near (" + std::to_string(x.x1) +
                     ", " + std::to_string(x.x2) + ")");
  }

  BoundaryNode corner(Point2 x, std::size_t a, std::size_t j, Vec2 T, Vec2 n,
                      double s) {
    double lo = 0.0;
    double hi = s;
    Point2 at_hi = *corrected(x, a, T, n, s);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      auto y = corrected(x, a, T, n, mid);
      if (!y) {
        const Point2 chord = x + mid * T;
        y = chord;
      }
      if (fn(j).value(*y) > 0.0) {
        hi = mid;
        at_hi = *y;
      } else {
        lo = mid;
      }
    }
    Point2 c = at_hi;
    if (auto pol = detail::polish_intersection(fn(a), fn(j), c, 1e-13,
                                               opt_.max_newton);
        pol && distance(*pol, c) < h_) {
      c = *pol;
    }
    const double ra = std::fabs(fn(a).value(c));
    const double rj = std::fabs(fn(j).value(c));
    if (ra > 1e-8 || rj > 1e-8) {
      throw TraceError("corner refinement failed");
    }
    BoundaryNode node;
    node.point = c;
    node.active = j;
    node.is_corner = true;
    node.incoming = a;
    node.outgoing = j;
    if (!(corner_check(p_, node) > 0.0)) {
      throw TraceError("corner orientation violated between '" +
                       p_.constraint(a).name + "' and '" +
                       p_.constraint(j).name + "'");
    }
    return node;
  }

  const Problem2D& p_;
  TraceOptions opt_;
  double h_ = 0.0;
  std::size_t max_steps_ = 0;
  BoundaryPath path_;
  Point2 start_;
  std::size_t start_active_ = 0;
};

}  // namespace

BoundaryPath trace_boundary(const Problem2D& p, Point2 start,
                            const TraceOptions& opt) {
  return Tracer(p, opt).run(start);
}

BoundaryPath trace_boundary(const Problem2D& p, Point2 start, double step) {
  if (!(step > 0.0)) throw PreconditionError("step must be positive");
  TraceOptions opt;
  opt.step = step;
  return trace_boundary(p, start, opt);
}

std::vector<BoundaryPath> trace_all_boundaries(const Problem2D& p,
                                               double step) {
  const Box2& box = p.box();
  const double h = step > 0.0 ? step : 1e-2 * box.diagonal();
  std::vector<Point2> seeds;

  constexpr int kGrid = 120;
  auto on_boundary = [&](Point2 y) {
    try {
      return is_feasible(p, y, 1e-9);
    } catch (const DomainError&) {
      return false;
    }
  };
  for (std::size_t i = 0; i < p.user_constraint_count(); ++i) {
    const Function& g = p.constraint(i).fn;
    for (int axis = 0; axis < 2; ++axis) {
      for (int k = 0; k <= kGrid; ++k) {
        auto at = [&](double u) {
          const double line = double(k) / kGrid;
          return axis == 0
                     ? Point2{box.lo1 + line * box.width(),
                              box.lo2 + u * box.height()}
                     : Point2{box.lo1 + u * box.width(),
                              box.lo2 + line * box.height()};
        };
        bool prev_ok = false;
        double prev = 0.0;
        for (int m = 0; m <= kGrid; ++m) {
          const double u = double(m) / kGrid;
          bool bad = false;
          const double v = g.value(at(u), &bad);
          if (bad || !std::isfinite(v)) {
            prev_ok = false;
            continue;
          }
          if (prev_ok && ((prev <= 0.0) != (v <= 0.0))) {
            double lo = double(m - 1) / kGrid;
            double hi = u;
            const bool lo_inside = prev <= 0.0;
            for (int it = 0; it < 60; ++it) {
              const double mid = 0.5 * (lo + hi);
              bool b2 = false;
              const double gv = g.value(at(mid), &b2);
              if (b2) break;
              if ((gv <= 0.0) == lo_inside) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            Point2 y = at(lo_inside ? lo : hi);
            if (auto pr = detail::project_gradient(g, y, 1e-12, 20)) y = *pr;
            if (on_boundary(y)) seeds.push_back(y);
          }
          prev = v;
          prev_ok = true;
        }
      }
    }
  }
  constexpr int kEdge = 200;
  for (int k = 0; k <= kEdge; ++k) {
    const double u = double(k) / kEdge;
    const Point2 edge_points[4] = {
        {box.lo1 + u * box.width(), box.lo2},
        {box.hi1, box.lo2 + u * box.height()},
        {box.hi1 - u * box.width(), box.hi2},
        {box.lo1, box.hi2 - u * box.height()},
    };
    for (const Point2& y : edge_points) {
      if (on_boundary(y)) seeds.push_back(y);
    }
  }

  std::vector<BoundaryPath> paths;
  for (const Point2& s : seeds) {
    bool covered = false;
    for (const auto& path : paths) {
      for (const auto& node : path.nodes) {
        if (distance(node.point, s) <= 1.5 * h) {
          covered = true;
          break;
        }
      }
      if (covered) break;
    }
    if (covered) continue;
    paths.push_back(trace_boundary(p, s, h));
  }
  return paths;
}

namespace {

int sign_with_slack(double v, double slack) {
  if (v > slack) return 1;
  if (v < -slack) return -1;
  return 0;
}

bool on_segment(Point2 p, Point2 q, Point2 r, double slack) {
  return r.x1 >= std::min(p.x1, q.x1) - slack &&
         r.x1 <= std::max(p.x1, q.x1) + slack &&
         r.x2 >= std::min(p.x2, q.x2) - slack &&
         r.x2 <= std::max(p.x2, q.x2) + slack;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  constexpr double kSlack = 1e-12;
  const int o1 = sign_with_slack(cross(b - a, c - a), kSlack);
  const int o2 = sign_with_slack(cross(b - a, d - a), kSlack);
  const int o3 = sign_with_slack(cross(d - c, a - c), kSlack);
  const int o4 = sign_with_slack(cross(d - c, b - c), kSlack);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c, kSlack)) return true;
  if (o2 == 0 && on_segment(a, b, d, kSlack)) return true;
  if (o3 == 0 && on_segment(c, d, a, kSlack)) return true;
  if (o4 == 0 && on_segment(c, d, b, kSlack)) return true;
  return false;
}

}  // namespace

bool is_simple(const BoundaryPath& path) {
  const auto& nodes = path.nodes;
  const std::size_t m = nodes.size();
  if (m < 3) throw PreconditionError("is_simple needs at least 3 nodes");
  const std::size_t segs = path.closed ? m : m - 1;
  auto seg = [&](std::size_t i) {
    return std::pair{nodes[i].point, nodes[(i + 1) % m].point};
  };
  for (std::size_t i = 0; i < segs; ++i) {
    const auto [a, b] = seg(i);
    const double lo1 = std::min(a.x1, b.x1), hi1 = std::max(a.x1, b.x1);
    const double lo2 = std::min(a.x2, b.x2), hi2 = std::max(a.x2, b.x2);
    for (std::size_t j = i + 2; j < segs; ++j) {
      if (path.closed && i == 0 && j == segs - 1) continue;
      const auto [c, d] = seg(j);
      if (std::max(c.x1, d.x1) < lo1 - 1e-12 ||
          std::min(c.x1, d.x1) > hi1 + 1e-12 ||
          std::max(c.x2, d.x2) < lo2 - 1e-12 ||
          std::min(c.x2, d.x2) > hi2 + 1e-12) {
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

CrossingSequence crossing_sequence(const Problem2D& p,
                                   const BoundaryPath& path,
                                   const Expression& l) {
  if (!is_affine(l)) throw PreconditionError("line expression is not affine");
  const Function L(l);
  const Vec2 gl = L.gradient({0.0, 0.0});
  if (norm(gl) == 0.0) throw PreconditionError("line expression is constant");
  const auto& nodes = path.nodes;
  const std::size_t m = nodes.size();
  CrossingSequence out;
  if (m < 2) return out;

  const Function& f = p.objective();
  bool varies = false;
  for (const auto& n : nodes) {
    const Vec2 gf = f.gradient(n.point);
    if (std::fabs(cross(gf, gl)) > 1e-10 * std::max(1.0, norm(gf) * norm(gl))) {
      varies = true;
      break;
    }
  }
  if (!varies) throw ConstantOnLineError("objective is constant along l = 0");

  double scale = 0.0;
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = L.value(nodes[i].point);
    scale = std::max(scale, std::fabs(v[i]));
  }
  const double zero_tol = 1e-14 * std::max(1.0, scale);
  auto sgn = [&](std::size_t i) { return sign_with_slack(v[i], zero_tol); };

  struct Raw {
    std::size_t seg;  // crossing lies on segment seg -> seg+1 (or at node)
    double s;         // fraction along the segment
    double t;
    Point2 point;
    int from;
    std::size_t active;
  };
  std::vector<Raw> raw;

  const bool cyclic = path.closed;
  std::size_t anchor = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(i) != 0) {
      anchor = i;
      break;
    }
  }
  if (anchor == m) {
    out.warnings.push_back("path lies on the line");
    return out;
  }
  auto seg_length = [&](std::size_t i) {
    return distance(nodes[i].point, nodes[(i + 1) % m].point);
  };

  std::size_t prev = anchor;
  const std::size_t span = cyclic ? m : m - anchor - 1;
  for (std::size_t step = 1; step <= span; ++step) {
    const std::size_t j = (anchor + step) % m;
    const int sj = sgn(j);
    if (sj == 0) continue;
    const int sp = sgn(prev);
    const std::size_t gap = (j + m - prev) % m;
    if (sj != sp) {
      if (gap == 1) {
        const BoundaryNode& a = nodes[prev];
        const Point2 pa = a.point;
        const Point2 pb = nodes[j].point;
        const Function& g = p.constraint(a.active).fn;
        const Vec2 ga = g.gradient(pa);
        const Vec2 nrm = ga / std::max(norm(ga), 1e-300);
        auto point_at = [&](double s) {
          const Point2 chord = pa + s * (pb - pa);
          auto y = detail::project_along(g, chord, nrm, 1e-12, 50);
          return y && distance(*y, chord) < distance(pa, pb) ? *y : chord;
        };
        double lo = 0.0, hi = 1.0;
        const double len = seg_length(prev);
        while ((hi - lo) * len > 1e-10) {
          const double mid = 0.5 * (lo + hi);
          const int sm = sign_with_slack(L.value(point_at(mid)), 0.0);
          if (sm == sp) {
            lo = mid;
          } else if (sm == 0) {
            lo = hi = mid;
          } else {
            hi = mid;
          }
        }
        const double s = 0.5 * (lo + hi);
        raw.push_back({prev, s, nodes[prev].t + s * len, point_at(s), sp,
                       a.active});
      } else {
        // Exact zeros at the nodes between prev and j; take the middle one.
        const std::size_t mid = (prev + (gap / 2)) % m;
        raw.push_back(
            {mid, 0.0, nodes[mid].t, nodes[mid].point, sp, nodes[mid].active});
      }
    } else if (gap > 1) {
      out.warnings.push_back("line touches the boundary without crossing");
    }
    prev = j;
  }

  // Tangency filter and orientation data.
  struct Kept {
    Raw r;
    int cross_sign;
  };
  std::vector<Kept> kept;
  for (const Raw& r : raw) {
    Vec2 T;
    try {
      T = unit_tangent(p.constraint(r.active).fn, r.point,
                       p.tolerances().gradient);
    } catch (const LicqError&) {
      out.warnings.push_back("degenerate gradient at a crossing");
      continue;
    }
    const Vec2 n = gl / norm(gl);
    const double c = cross(T, n);
    if (std::fabs(dot(T, n)) <= 1e-8) {
      out.warnings.push_back("line tangent to the boundary; crossing skipped");
      continue;
    }
    kept.push_back({r, c > 0.0 ? 1 : -1});
  }
  std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
    return a.r.seg != b.r.seg ? a.r.seg < b.r.seg : a.r.s < b.r.s;
  });
  if (kept.empty()) return out;

  std::size_t first = 0;
  if (cyclic) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].r.from > 0) {
        first = i;
        break;
      }
    }
  }
  const std::size_t count = kept.size();
  for (std::size_t k = 0; k < count; ++k) {
    const Kept& cur = kept[(first + k) % count];
    Crossing c;
    c.k = k;
    c.t = cur.r.t;
    c.point = cur.r.point;
    c.even = cur.r.from > 0;
    c.cross_sign = cur.cross_sign;
    // Max of f over the arc up to the next crossing.
    double best = f.value(cur.r.point);
    const bool has_next = cyclic || k + 1 < count;
    if (has_next) {
      const Kept& nxt = kept[(first + k + 1) % count];
      best = std::max(best, f.value(nxt.r.point));
      std::size_t i = (cur.r.seg + 1) % m;
      const std::size_t stop = (nxt.r.seg + 1) % m;
      const bool same = nxt.r.seg == cur.r.seg && nxt.r.s > cur.r.s;
      if (!same) {
        for (std::size_t guard = 0; guard < m && i != stop; ++guard) {
          best = std::max(best, f.value(nodes[i].point));
          i = (i + 1) % m;
        }
      }
    } else {
      for (std::size_t i = cur.r.seg + 1; i < m; ++i) {
        best = std::max(best, f.value(nodes[i].point));
      }
    }
    c.max_f_to_next = best;
    out.crossings.push_back(c);
  }
  return out;
}

}  // namespace invex2d
