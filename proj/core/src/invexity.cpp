#include "invex2d/invexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invex2d/error.hpp"
#include "invex2d/geometry.hpp"
#include "numerics.hpp"

namespace invex2d {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kBoundaryInvex: return "boundary-invex";
    case Verdict::kWeaklyBoundaryInvex: return "weakly-boundary-invex";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr double kFlat = 1e-9;
constexpr double kLambdaTol = 1e-8;

double scaled_cross(const Function& f, const Function& g, Point2 x) {
  const Vec2 df = f.gradient(x);
  const Vec2 dg = g.gradient(x);
  const double s = norm(df) * norm(dg);
  return s == 0.0 ? 0.0 : cross(df, dg) / s;
}

struct RawStationary {
  Point2 x;
  bool degenerate;
};

void branch_stationary(const Function& f, const Function& g,
                       const CurveBranch& b, std::vector<RawStationary>& out,
                       bool& degenerate) {
  const auto& pts = b.points;
  const std::size_t m = pts.size();
  if (m < 2) return;
  std::vector<double> c(m);
  std::vector<char> zero(m);
  std::size_t zeros = 0;
  for (std::size_t k = 0; k < m; ++k) {
    c[k] = scaled_cross(f, g, pts[k]);
    zero[k] = std::fabs(c[k]) <= kFlat;
    zeros += zero[k];
  }
  if (zeros == m) {
    degenerate = true;
    out.push_back({pts[m / 2], true});
    return;
  }
  // Zero runs: isolated zeros are ordinary stationary points, longer runs
  // are flat arcs.
  std::size_t k = 0;
  while (k < m) {
    if (!zero[k]) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 1 < m && zero[end + 1]) ++end;
    const bool flat = end - k + 1 >= 3;
    if (flat) degenerate = true;
    Point2 y = pts[(k + end) / 2];
    if (!flat) {
      if (auto pol = detail::polish_stationary(f, g, y, 1e-14, 20);
          pol && distance(*pol, y) < 1e-3) {
        y = *pol;
      }
    }
    out.push_back({y, flat});
    k = end + 1;
  }
  const std::size_t segs = b.closed ? m : m - 1;
  for (std::size_t s = 0; s < segs; ++s) {
    const std::size_t s2 = (s + 1) % m;
    if (zero[s] || zero[s2] || (c[s] > 0.0) == (c[s2] > 0.0)) continue;
    const Point2 pa = pts[s];
    const Point2 pb = pts[s2];
    const Vec2 ga = g.gradient(pa);
    const Vec2 nrm = ga / norm(ga);
    const double len = distance(pa, pb);
    auto point_at = [&](double u) {
      const Point2 chord = pa + u * (pb - pa);
      auto y = detail::project_along(g, chord, nrm, 1e-13, 50);
      return y && distance(*y, chord) <= len ? *y : chord;
    };
    double lo = 0.0, hi = 1.0;
    const bool lo_pos = c[s] > 0.0;
    while ((hi - lo) * len > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      ((scaled_cross(f, g, point_at(mid)) > 0.0) == lo_pos ? lo : hi) = mid;
    }
    Point2 y = point_at(0.5 * (lo + hi));
    if (auto pol = detail::polish_stationary(f, g, y, 1e-14, 20);
        pol && distance(*pol, y) <= len) {
      y = *pol;
    }
    out.push_back({y, false});
  }
}

}  // namespace

AuxiliaryResult solve_aux_min(const Problem2D& p, std::size_t i) {
  AuxiliaryResult r;
  r.constraint = i;
  const Function& f = p.objective();
  const Function& g = p.constraint(i).fn;
  r.branches = trace_level_curve(g, p.box().inflated(1.05));
  r.curve_found = !r.branches.empty();
  if (!r.curve_found) {
    r.notes.push_back("curve g = 0 does not meet the box");
    return r;
  }

  std::vector<RawStationary> raw;
  for (const auto& b : r.branches) {
    branch_stationary(f, g, b, raw, r.degenerate);
    if (b.truncated_front) {
      r.truncations.push_back({b.points.front(), f.value(b.points.front())});
    }
    if (b.truncated_back) {
      r.truncations.push_back({b.points.back(), f.value(b.points.back())});
    }
  }

  for (const auto& s : raw) {
    bool dup = false;
    for (const auto& q : r.points) {
      if (distance(q.location, s.x) <= 1e-7) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    AuxiliaryStationaryPoint a;
    a.location = s.x;
    a.degenerate = s.degenerate;
    const Vec2 df = f.gradient(s.x);
    const Vec2 dg = g.gradient(s.x);
    a.lambda = -dot(df, dg) / dot(dg, dg);
    a.residual = norm(df + a.lambda * dg);
    a.f_value = f.value(s.x);
    const Vec2 t = tangent_of_gradient(dg) / norm(dg);
    a.curve_second_derivative =
        (f.hessian(s.x) + a.lambda * g.hessian(s.x)).quad(t);
    r.points.push_back(a);
  }
  if (r.degenerate) r.notes.push_back("objective is constant on an arc");

  double min_s = std::numeric_limits<double>::infinity();
  for (const auto& a : r.points) min_s = std::min(min_s, a.f_value);
  double min_t = std::numeric_limits<double>::infinity();
  for (const auto& t : r.truncations) min_t = std::min(min_t, t.f_value);
  const double tie = 1e-9 * std::max(1.0, std::fabs(min_s));
  if (min_t < min_s - tie) {
    r.unbounded_in_box = true;
    r.notes.push_back("minimum over the clipped curve is at the box edge");
    return r;
  }
  std::vector<const AuxiliaryStationaryPoint*> cands;
  for (auto& a : r.points) {
    if (a.f_value <= min_s + tie) {
      a.is_global_min_candidate = true;
      cands.push_back(&a);
    }
  }
  for (std::size_t a = 0; a < cands.size(); ++a) {
    if (cands[a]->curve_second_derivative <= 1e-8 || cands[a]->degenerate) {
      r.minimum_not_strict = true;
    }
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      if (distance(cands[a]->location, cands[b]->location) > 1e-4) {
        r.minimum_not_strict = true;
      }
    }
  }
  return r;
}

namespace {

ConvexityProbe probe_from_branches(const Function& g,
                                   const std::vector<CurveBranch>& branches) {
  ConvexityProbe probe;
  std::vector<Point2> pts;
  for (const auto& b : branches) {
    pts.insert(pts.end(), b.points.begin(), b.points.end());
  }
  probe.curve_found = !pts.empty();
  probe.min_eigenvalue = std::numeric_limits<double>::infinity();
  const std::size_t samples = std::min<std::size_t>(200, pts.size());
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t idx =
        samples == 1 ? 0 : k * (pts.size() - 1) / (samples - 1);
    const double e = g.hessian(pts[idx]).min_eigenvalue();
    if (e < probe.min_eigenvalue) {
      probe.min_eigenvalue = e;
      probe.worst_point = pts[idx];
    }
  }
  if (!probe.curve_found) probe.min_eigenvalue = 0.0;
  probe.nonconvex = probe.min_eigenvalue < -1e-8;
  return probe;
}

bool other_active(const Problem2D& p, std::size_t i, Point2 x) {
  for (std::size_t j = 0; j < p.constraints().size(); ++j) {
    if (j != i &&
        std::fabs(p.constraint(j).fn.value(x)) <= p.tolerances().active) {
      return true;
    }
  }
  return false;
}

bool safe_infeasible(const Problem2D& p, Point2 x) {
  try {
    return !is_feasible(p, x);
  } catch (const DomainError&) {
    return true;
  }
}

enum class Mode { kWeak, kBoundary };

InvexityReport run_check(const Problem2D& p, Mode mode) {
  InvexityReport report;
  bool inconclusive = false;
  for (std::size_t i = 0; i < p.user_constraint_count(); ++i) {
    const Constraint& c = p.constraint(i);
    ConstraintEvidence ev;
    ev.index = i;
    ev.name = c.name;
    if (c.known_convex) {
      ev.notes.push_back("tagged convex");
      report.constraints.push_back(std::move(ev));
      continue;
    }
    AuxiliaryResult aux;
    try {
      aux = solve_aux_min(p, i);
    } catch (const Error& e) {
      ev.nonconvex = true;
      ev.inconclusive = true;
      ev.passed = false;
      ev.notes.push_back(std::string("auxiliary solve failed: ") + e.what());
      inconclusive = true;
      report.constraints.push_back(std::move(ev));
      continue;
    }
    const ConvexityProbe probe = probe_from_branches(c.fn, aux.branches);
    ev.nonconvex = probe.nonconvex;
    ev.min_hessian_eigenvalue = probe.min_eigenvalue;
    ev.curve_found = aux.curve_found;
    ev.unbounded_in_box = aux.unbounded_in_box;
    ev.notes = aux.notes;
    if (!probe.nonconvex) {
      report.constraints.push_back(std::move(ev));
      continue;
    }
    if (mode == Mode::kWeak && aux.unbounded_in_box) {
      report.constraints.push_back(std::move(ev));
      continue;
    }

    for (const auto& a : aux.points) {
      if (mode == Mode::kWeak && !a.is_global_min_candidate) continue;
      PointEvidence pe;
      pe.constraint = i;
      pe.point = a;
      ClauseEvaluation& cl = pe.clauses;
      cl.infeasible = safe_infeasible(p, a.location);
      cl.nonnegative_lambda = a.lambda >= -kLambdaTol;
      if (mode == Mode::kWeak) {
        cl.not_strict = aux.minimum_not_strict;
        cl.other_active = other_active(p, i, a.location);
        if (cl.infeasible) {
          cl.satisfied_by = "infeasible";
        } else if (cl.not_strict) {
          cl.satisfied_by = "not-strict";
        } else if (cl.nonnegative_lambda) {
          cl.satisfied_by = "nonnegative-multiplier";
        } else if (cl.other_active) {
          cl.satisfied_by = "other-constraint-active";
        }
        cl.satisfied = !cl.satisfied_by.empty();
        if (cl.satisfied && cl.satisfied_by == "not-strict" &&
            aux.degenerate && !cl.nonnegative_lambda && !cl.other_active) {
          cl.inconclusive = true;
        }
      } else {
        if (!cl.infeasible) {
          try {
            const KKTCheck chk = is_kkt(p, a.location);
            if (chk.is_kkt) {
              cl.classification =
                  classify_detail(p, a.location, chk).classification;
              cl.local_max =
                  cl.classification == Classification::kLocalMax ||
                  cl.classification ==
                      Classification::kInteriorUnconstrainedMax;
              cl.inconclusive =
                  cl.classification == Classification::kInconclusive;
            } else {
              cl.classification = Classification::kNotLocalMax;
            }
          } catch (const Error& e) {
            cl.inconclusive = true;
            ev.notes.push_back(std::string("classification failed: ") +
                               e.what());
          }
        }
        if (cl.infeasible) {
          cl.satisfied_by = "infeasible";
        } else if (cl.nonnegative_lambda) {
          cl.satisfied_by = "nonnegative-multiplier";
        } else if (cl.local_max) {
          cl.satisfied_by = "local-max";
        }
        cl.satisfied = !cl.satisfied_by.empty();
        if (cl.satisfied) cl.inconclusive = false;
      }
      if (cl.inconclusive) {
        ev.inconclusive = true;
      } else if (!cl.satisfied) {
        ev.passed = false;
        report.witnesses.push_back(pe);
      }
      ev.points.push_back(std::move(pe));
    }
    if (ev.inconclusive) inconclusive = true;
    report.constraints.push_back(std::move(ev));
  }
  if (!report.witnesses.empty()) {
    report.verdict = Verdict::kViolated;
  } else if (inconclusive) {
    report.verdict = Verdict::kInconclusive;
  } else {
    report.verdict = mode == Mode::kWeak ? Verdict::kWeaklyBoundaryInvex
                                         : Verdict::kBoundaryInvex;
  }
  return report;
}

}  // namespace

ConvexityProbe probe_constraint_convexity(const Problem2D& p, std::size_t i) {
  const Function& g = p.constraint(i).fn;
  return probe_from_branches(g, trace_level_curve(g, p.box().inflated(1.05)));
}

InvexityReport check_weak(const Problem2D& p) {
  return run_check(p, Mode::kWeak);
}

InvexityReport check_boundary_invex(const Problem2D& p) {
  return run_check(p, Mode::kBoundary);
}

bool check_ray_decrease(const Expression& f, const Expression& line, Point2 y,
                        int samples, double spacing) {
  if (samples < 1) throw PreconditionError("samples must be >= 1");
  if (!(spacing > 0.0)) throw PreconditionError("spacing must be positive");
  if (!is_affine(line)) throw PreconditionError("line is not affine");
  const Function F(f);
  const Function L(line);
  const Vec2 gl = L.gradient(y);
  if (norm(gl) == 0.0) throw PreconditionError("line expression is constant");
  const Vec2 d = tangent_of_gradient(gl) / norm(gl);

  const double dd = dot(F.gradient(y), d);
  const Vec2 dir = dd <= 0.0 ? d : -1.0 * d;

  std::vector<double> values;
  values.reserve(samples + 1);
  bool varies = false;
  for (int k = 0; k <= samples; ++k) {
    const Point2 x = y + (k * spacing) * dir;
    values.push_back(F.value(x));
    if (std::fabs(cross(F.gradient(x), gl)) > 1e-10 * norm(gl)) varies = true;
  }
  if (!varies) {
    throw ConstantOnLineError("objective is constant along the line");
  }
  const double tol = 1e-12 * std::max(1.0, std::fabs(values[0]));
  for (int k = 0; k < samples; ++k) {
    if (!(values[k] - values[k + 1] > tol)) return false;
  }
  return true;
}

}  // namespace invex2d
