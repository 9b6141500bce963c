#include "invex2d/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "invex2d/error.hpp"
#include "invex2d/geometry.hpp"
#include "invex2d/neighborhood.hpp"
#include "numerics.hpp"

namespace invex2d {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kLocalMax: return "local-max";
    case Classification::kNotLocalMax: return "not-local-max";
    case Classification::kInteriorUnconstrainedMax:
      return "interior-unconstrained-max";
    case Classification::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr double kStationarityTol = 1e-6;
constexpr double kMultiplierTol = 1e-8;
constexpr double kCurvatureTol = 1e-8;

}  // namespace

std::pair<double, double> multipliers_two_active(const Problem2D& p, Point2 x,
                                                 std::size_t i,
                                                 std::size_t j) {
  const auto& gi = p.constraint(i).fn;
  const auto& gj = p.constraint(j).fn;
  const double act = p.tolerances().active;
  if (std::fabs(gi.value(x)) > act || std::fabs(gj.value(x)) > act) {
    throw PreconditionError("both constraints must be active");
  }
  const Vec2 df = p.objective().gradient(x);
  const Vec2 dgi = gi.gradient(x);
  const Vec2 dgj = gj.gradient(x);
  const double d = cross(dgi, dgj);
  if (!(std::fabs(d) >= p.tolerances().gradient * norm(dgi) * norm(dgj)) ||
      d == 0.0) {
    throw LicqError("active constraint gradients are linearly dependent");
  }
  return {cross(df, dgj) / d, cross(dgi, df) / d};
}

KKTCheck is_kkt(const Problem2D& p, Point2 x) {
  KKTCheck r;
  r.active = active_set(p, x);
  const Vec2 df = p.objective().gradient(x);

  // Drop constraints whose gradient points the same way as one already
  // kept (duplicated boundary pieces).
  std::vector<std::size_t> kept;
  std::vector<Vec2> grads;
  for (std::size_t i : r.active.indices) {
    const Vec2 gi = p.constraint(i).fn.gradient(x);
    if (norm(gi) < p.tolerances().gradient) {
      throw LicqError("degenerate gradient of active constraint '" +
                      p.constraint(i).name + "'");
    }
    bool redundant = false;
    for (const Vec2& gk : grads) {
      if (std::fabs(cross(gi, gk)) <= 1e-9 * norm(gi) * norm(gk) &&
          dot(gi, gk) > 0.0) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;
    kept.push_back(i);
    grads.push_back(gi);
  }
  if (kept.size() > 2) {
    throw DegenerateVertexError("more than two non-redundant active "
                                "constraints");
  }

  if (kept.empty()) {
    r.residual = norm(df);
    r.is_kkt = r.residual <= kStationarityTol;
    return r;
  }
  if (kept.size() == 1) {
    const Vec2 g = grads[0];
    const double mu = dot(df, g) / dot(g, g);
    r.multipliers[kept[0]] = mu;
    r.residual = norm(df - mu * g);
    r.is_kkt = r.residual <= kStationarityTol && mu >= -kMultiplierTol;
    return r;
  }
  const auto [mi, mj] = multipliers_two_active(p, x, kept[0], kept[1]);
  r.multipliers[kept[0]] = mi;
  r.multipliers[kept[1]] = mj;
  r.residual = norm(df - mi * grads[0] - mj * grads[1]);
  r.is_kkt = r.residual <= kStationarityTol && mi >= -kMultiplierTol &&
             mj >= -kMultiplierTol;
  return r;
}

ClassificationDetail classify_detail(const Problem2D& p, Point2 x,
                                     const KKTCheck& kkt) {
  if (!kkt.is_kkt) throw PreconditionError("classify needs a KKT point");
  ClassificationDetail d;

  std::vector<std::pair<std::size_t, double>> positive;
  for (const auto& [i, mu] : kkt.multipliers) {
    if (mu > kMultiplierTol) positive.emplace_back(i, mu);
  }
  if (positive.empty()) {
    d.second_order = Classification::kInteriorUnconstrainedMax;
  } else if (positive.size() == 2) {
    d.second_order = Classification::kLocalMax;
  } else {
    const auto [i, mu] = positive[0];
    const Function& g = p.constraint(i).fn;
    const Sym2 hg = g.hessian(x);
    const Vec2 grad = g.gradient(x);
    const Vec2 w = tangent_of_gradient(grad) / norm(grad);
    const Sym2 hl = p.objective().hessian(x) + (-mu) * hg;
    d.curvature = hl.quad(w);
    if (hg.min_eigenvalue() >= -kCurvatureTol &&
        p.concavity().concave) {
      d.second_order = Classification::kLocalMax;
    } else if (d.curvature <= -kCurvatureTol) {
      d.second_order = Classification::kLocalMax;
    } else if (d.curvature >= kCurvatureTol) {
      d.second_order = Classification::kNotLocalMax;
    } else {
      d.second_order = Classification::kInconclusive;
    }
  }

  const NeighborhoodResult nr = sample_neighborhood(p, x);
  d.sampled_local_max = nr.is_local_max;
  d.sampled_improvement = nr.best_improvement;

  switch (d.second_order) {
    case Classification::kInconclusive:
      d.classification = nr.is_local_max ? Classification::kLocalMax
                                         : Classification::kNotLocalMax;
      break;
    case Classification::kNotLocalMax:
      d.classification = nr.is_local_max ? Classification::kInconclusive
                                         : Classification::kNotLocalMax;
      break;
    default:
      d.classification =
          nr.is_local_max ? d.second_order : Classification::kInconclusive;
  }
  return d;
}

ClassificationDetail classify_detail(const Problem2D& p, Point2 x) {
  return classify_detail(p, x, is_kkt(p, x));
}

Classification classify(const Problem2D& p, Point2 x) {
  return classify_detail(p, x).classification;
}

namespace {

std::vector<Point2> interior_candidates(const Problem2D& p,
                                        const KKTSearchOptions& opt) {
  std::vector<Point2> out;
  const Box2& box = p.box();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u1(box.lo1, box.hi1);
  std::uniform_real_distribution<double> u2(box.lo2, box.hi2);
  const Function& f = p.objective();
  for (int r = 0; r <= opt.restarts; ++r) {
    Point2 x = r == 0 ? box.center() : Point2{u1(rng), u2(rng)};
    try {
      for (int it = 0; it < 100; ++it) {
        const Vec2 g = f.gradient(x);
        if (norm(g) <= 1e-13) break;
        const Sym2 h = f.hessian(x);
        auto step = detail::solve2(h.a11, h.a12, h.a12, h.a22, g);
        if (!step) break;
        x -= *step;
        if (!is_finite(x) || norm(*step) <= 1e-15 * (1.0 + norm(x))) break;
      }
      if (is_finite(x) && norm(f.gradient(x)) <= 1e-9 && is_feasible(p, x)) {
        out.push_back(x);
      }
    } catch (const DomainError&) {
    }
  }
  return out;
}

std::vector<Point2> path_candidates(const Problem2D& p,
                                    const BoundaryPath& path) {
  std::vector<Point2> out;
  const auto& nodes = path.nodes;
  const std::size_t m = nodes.size();
  if (m == 0) return out;
  const Function& f = p.objective();

  // Normalized cross(∇f, ∇g_a) at node k with respect to constraint a.
  auto scaled_cross = [&](Point2 x, std::size_t a) {
    const Vec2 df = f.gradient(x);
    const Vec2 dg = p.constraint(a).fn.gradient(x);
    const double s = norm(df) * norm(dg);
    return s == 0.0 ? 0.0 : cross(df, dg) / s;
  };
  constexpr double kFlat = 1e-9;

  std::vector<double> c(m);
  std::vector<char> zero(m);
  for (std::size_t k = 0; k < m; ++k) {
    c[k] = scaled_cross(nodes[k].point, nodes[k].active);
    zero[k] = std::fabs(c[k]) <= kFlat;
    if (nodes[k].is_corner) out.push_back(nodes[k].point);
  }

  // Runs of (near) zeros: one representative each.
  const std::size_t segs = path.closed ? m : m - 1;
  {
    std::size_t k = 0;
    while (k < m) {
      if (!zero[k]) {
        ++k;
        continue;
      }
      std::size_t end = k;
      while (end + 1 < m && zero[end + 1]) ++end;
      out.push_back(nodes[(k + end) / 2].point);
      k = end + 1;
    }
  }

  for (std::size_t k = 0; k < segs; ++k) {
    const std::size_t k2 = (k + 1) % m;
    if (zero[k]) continue;
    const std::size_t a = nodes[k].active;
    const double c2 = scaled_cross(nodes[k2].point, a);
    if (std::fabs(c2) <= kFlat || (c[k] > 0.0) == (c2 > 0.0)) continue;

    const Function& g = p.constraint(a).fn;
    const Point2 pa = nodes[k].point;
    const Point2 pb = nodes[k2].point;
    const Vec2 ga = g.gradient(pa);
    const Vec2 nrm = ga / norm(ga);
    const double len = distance(pa, pb);
    auto point_at = [&](double s) {
      const Point2 chord = pa + s * (pb - pa);
      auto y = detail::project_along(g, chord, nrm, 1e-12, 50);
      return y && distance(*y, chord) <= len ? *y : chord;
    };
    double lo = 0.0, hi = 1.0;
    const bool lo_positive = c[k] > 0.0;
    while ((hi - lo) * len > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if ((scaled_cross(point_at(mid), a) > 0.0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Point2 y = point_at(0.5 * (lo + hi));
    if (auto pol = detail::polish_stationary(f, g, y, 1e-14, 20);
        pol && distance(*pol, y) <= len) {
      y = *pol;
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace

std::vector<KKTPoint> find_kkt_points(const Problem2D& p,
                                      const std::vector<BoundaryPath>& paths,
                                      const KKTSearchOptions& opt) {
  std::vector<Point2> candidates = interior_candidates(p, opt);
  for (const auto& path : paths) {
    auto more = path_candidates(p, path);
    candidates.insert(candidates.end(), more.begin(), more.end());
  }

  std::vector<std::pair<Point2, KKTCheck>> accepted;
  for (const Point2& x : candidates) {
    if (!is_feasible(p, x)) continue;
    KKTCheck chk = is_kkt(p, x);
    if (!chk.is_kkt) continue;
    bool merged = false;
    for (auto& [y, other] : accepted) {
      if (distance(x, y) <= opt.dedup_radius) {
        if (chk.residual < other.residual) {
          y = x;
          other = chk;
        }
        merged = true;
        break;
      }
    }
    if (!merged) accepted.emplace_back(x, std::move(chk));
  }

  std::vector<KKTPoint> out;
  out.reserve(accepted.size());
  for (auto& [x, chk] : accepted) {
    KKTPoint k;
    k.location = x;
    k.active = chk.active;
    k.multipliers = chk.multipliers;
    k.residual = chk.residual;
    k.objective_value = p.objective().value(x);
    k.classification = classify_detail(p, x, chk).classification;
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<KKTPoint> find_kkt_points(const Problem2D& p,
                                      const BoundaryPath& boundary,
                                      int seeds) {
  KKTSearchOptions opt;
  opt.restarts = seeds;
  return find_kkt_points(p, std::vector<BoundaryPath>{boundary}, opt);
}

}  // namespace invex2d
