#include "invex2d/opf.hpp"

#include <algorithm>
#include <cmath>

#include "invex2d/error.hpp"

namespace invex2d::opf {

namespace {

constexpr double kAngleSlack = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

void validate(const LineParams& q) {
  const double pi6 = std::numbers::pi / 6.0;
  require(q.theta_lo >= -pi6 - kAngleSlack && q.theta_lo < q.theta_hi &&
              q.theta_hi <= pi6 + kAngleSlack,
          "angle bounds must satisfy -pi/6 <= theta_lo < theta_hi <= pi/6");
  require(q.v_lo >= 0.95 && q.v_lo < q.v_hi && q.v_hi <= 1.05,
          "voltage bounds must satisfy 0.95 <= v_lo < v_hi <= 1.05");
  require(q.w > 0.0 && q.w <= 1.1025, "w must lie in (0, 1.1025]");
  require(q.g > 0.0, "conductance g must be positive");
  require(std::isfinite(q.b), "susceptance b must be finite");
  require(q.y_abs2() > 0.0, "|Y| must be positive");
  require(q.s_u > 0.0 && std::isfinite(q.s_u), "s_u must be positive");
  require(q.c1 >= 0.0 && q.c2 >= 0.0 && std::isfinite(q.c1) &&
              std::isfinite(q.c2),
          "cost coefficients must be non-negative");
  require(!(q.p1_lo > q.p1_hi) && !(q.q1_lo > q.q1_hi) &&
              !(q.p2_lo > q.p2_hi) && !(q.q2_lo > q.q2_hi),
          "injection windows must satisfy lo <= hi");
}

Flows flows(const LineParams& q) {
  const Expression wr = x1();
  const Expression wi = x2();
  const Expression s = wr * wr + wi * wi;
  Flows f;
  f.p12 = q.g * q.w - q.g * wr - q.b * wi;
  f.q12 = -q.b * q.w + q.b * wr - q.g * wi;
  f.p21 = (q.g / q.w) * s - q.g * wr + q.b * wi;
  f.q21 = -(q.b / q.w) * s + q.b * wr + q.g * wi;
  return f;
}

OPFInstance build_opf_problem(const LineParams& params) {
  validate(params);
  const LineParams& q = params;
  Flows fl = flows(q);
  const Expression wr = x1();
  const Expression wi = x2();
  const Expression s = wr * wr + wi * wi;

  // Cheap constraints first: feasibility scans stop at the first failure.
  std::vector<ConstraintSpec> cs;
  cs.push_back({"tbound_lo", std::tan(q.theta_lo) * wr - wi, true});
  cs.push_back({"tbound_hi", wi - std::tan(q.theta_hi) * wr, true});
  cs.push_back({"wbound_lo", q.v_lo * q.v_lo - s / q.w, false});
  cs.push_back({"wbound_hi", s / q.w - q.v_hi * q.v_hi, false});
  cs.push_back({"therm_lim",
                fl.p12 * fl.p12 + fl.q12 * fl.q12 - q.s_u, true});
  cs.push_back({"therm_lim2",
                fl.p21 * fl.p21 + fl.q21 * fl.q21 - q.s_u, false});
  auto window = [&](const std::string& name, const Expression& e, double lo,
                    double hi) {
    if (std::isfinite(lo)) cs.push_back({name + "_lo", lo - e, false});
    if (std::isfinite(hi)) cs.push_back({name + "_hi", e - hi, false});
  };
  window("p1", fl.p12, q.p1_lo, q.p1_hi);
  window("q1", fl.q12, q.q1_lo, q.q1_hi);
  window("p2", fl.p21, q.p2_lo, q.p2_hi);
  window("q2", fl.q21, q.q2_lo, q.q2_hi);

  const Expression cost = q.c1 * fl.p12 + q.c2 * fl.p21;
  const double m = 1.2 * std::max(q.w, 1.0);
  Problem2D problem(-cost, std::move(cs), Box2{-m, m, -m, m});
  return OPFInstance{params, std::move(fl), std::move(problem)};
}

MinWrReport min_wr_bound(const LineParams& params, int resolution) {
  validate(params);
  if (resolution < 2) throw PreconditionError("grid resolution < 2");
  const OPFInstance inst = build_opf_problem(params);
  const LineParams& q = params;
  MinWrReport r;
  const double t = std::tan(q.theta_hi);
  r.threshold = std::sqrt(q.v_lo * q.v_lo * q.w / (t * t + 1.0));
  r.bound_sqrt = 0.82 * std::sqrt(q.w);
  r.bound_linear = 0.77 * q.w;
  r.chain_holds = r.threshold >= r.bound_sqrt && r.bound_sqrt >= r.bound_linear;

  const Box2& box = inst.problem.box();
  const double h = box.width() / (resolution - 1);
  r.min_feasible_wr = std::numeric_limits<double>::infinity();
  for (int i = 0; i < resolution; ++i) {
    const double wr = box.lo1 + i * h;
    for (int j = 0; j < resolution; ++j) {
      const double wi = box.lo2 + j * h;
      ++r.grid_points;
      if (!is_feasible(inst.problem, {wr, wi})) continue;
      ++r.feasible_points;
      r.min_feasible_wr = std::min(r.min_feasible_wr, wr);
      if (wr < r.bound_linear) ++r.violations;
    }
  }
  return r;
}

std::string_view to_string(AuxKind k) {
  switch (k) {
    case AuxKind::kWbound: return "wbound";
    case AuxKind::kPbound: return "pbound";
    case AuxKind::kQbound: return "qbound";
  }
  return "wbound";
}

AuxKKTReport aux_kkt_points(const LineParams& params, AuxKind which) {
  validate(params);
  const LineParams& q = params;
  const OPFInstance inst = build_opf_problem(params);
  AuxKKTReport r;
  r.kind = which;
  const double w = q.w, g = q.g, b = q.b, c1 = q.c1, c2 = q.c2;
  const double y2 = q.y_abs2();

  auto add = [&](double wr, double wi, double lambda, double bound) {
    AuxCandidate c;
    c.wr = wr;
    c.wi = wi;
    c.lambda = lambda;
    c.below_bound = wr < bound;
    c.feasible = is_feasible(inst.problem, {wr, wi});
    r.candidates.push_back(c);
  };

  switch (which) {
    case AuxKind::kWbound: {
      // −g(c1+c2) = 2λ w^R, b(c2−c1) = 2λ w^I, (w^R)²+(w^I)² = v_lo² w.
      const double num =
          std::sqrt(g * g * (c1 + c2) * (c1 + c2) + b * b * (c2 - c1) * (c2 - c1));
      if (num == 0.0) {
        r.no_real_solution = true;
        r.note = "objective gradient vanishes; no multiplier";
        break;
      }
      const double lambda = num / (2.0 * q.v_lo * std::sqrt(w));
      add(-g * (c1 + c2) / (2.0 * lambda), b * (c2 - c1) / (2.0 * lambda),
          lambda, 0.0);
      break;
    }
    case AuxKind::kPbound: {
      if (!std::isfinite(q.p2_lo)) {
        r.no_real_solution = true;
        r.note = "no lower bound on p21";
        break;
      }
      if (c1 <= 0.0) {
        r.no_real_solution = true;
        r.note = "c1 = 0 leaves the multiplier undetermined";
        break;
      }
      // With a = c1/λ: w^R = (w/2)(1 − a), w^I = −(b w / 2g)(1 + a) and
      // a² = 1 + 4 g P / (w |Y|).
      const double a2 = 1.0 + 4.0 * g * q.p2_lo / (w * y2);
      if (a2 <= 0.0) {
        r.no_real_solution = true;
        r.note = "curve p21 = p2_lo is empty";
        break;
      }
      const double a = std::sqrt(a2);
      add(0.5 * w * (1.0 - a), -(b * w / (2.0 * g)) * (1.0 + a), c1 / a,
          0.5 * w);
      break;
    }
    case AuxKind::kQbound: {
      if (!std::isfinite(q.q2_lo)) {
        r.no_real_solution = true;
        r.note = "no lower bound on q21";
        break;
      }
      if (c1 <= 0.0 || b == 0.0) {
        r.no_real_solution = true;
        r.note = "c1 = 0 or b = 0 leaves the system degenerate";
        break;
      }
      // With α = c1 g/λ: w^R = (w/2)(1 − α), w^I = (w/2)(g/b + κα),
      // κ = (−c1 b + c2|Y|/b)/(c1 g), α²(1 + κ²) = 1 + g²/b² − 4Q/(b w).
      const double kappa = (-c1 * b + c2 * y2 / b) / (c1 * g);
      const double rhs = 1.0 + g * g / (b * b) - 4.0 * q.q2_lo / (b * w);
      if (rhs <= 0.0) {
        r.no_real_solution = true;
        r.note = "curve q21 = q2_lo is empty";
        break;
      }
      const double alpha = std::sqrt(rhs / (1.0 + kappa * kappa));
      add(0.5 * w * (1.0 - alpha), 0.5 * w * (g / b + kappa * alpha),
          c1 * g / alpha, 0.5 * w);
      break;
    }
  }
  return r;
}

double phi(const LineParams& q, double wr) {
  const double a = 4.0 * q.s_u / q.y_abs2();
  const double d = 2.0 * wr - q.w;
  const double R = std::sqrt(d * d + a);
  return 0.5 * q.w * (d + R) - wr * wr;
}

double phi_second(const LineParams& q, double wr) {
  const double a = 4.0 * q.s_u / q.y_abs2();
  const double d = 2.0 * wr - q.w;
  const double R = std::sqrt(d * d + a);
  return 2.0 * q.w * a / (R * R * R) - 2.0;
}

double psi(double x, double w) {
  return std::cbrt(x * x) * std::cbrt(w * w) - x;
}

ThermalReport thermal_convexity(const LineParams& params, int samples) {
  validate(params);
  if (samples < 10) throw PreconditionError("samples must be >= 10");
  const LineParams& q = params;
  ThermalReport r;
  r.threshold_constant = 1.0 / (3.0 * std::sqrt(3.0)) + 0.5;
  r.threshold = q.w * r.threshold_constant;
  r.samples = samples;
  r.max_phi2 = -std::numeric_limits<double>::infinity();
  constexpr double h = 1e-5;
  const double lo = r.threshold;
  const double hi = 1.2 * q.w;
  for (int k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * (k + 1) / samples;
    const double fd =
        (phi(q, x + h) - 2.0 * phi(q, x) + phi(q, x - h)) / (h * h);
    r.max_phi2 = std::max(r.max_phi2, fd);
    r.max_fd_error = std::max(r.max_fd_error, std::fabs(fd - phi_second(q, x)));
    if (fd < 0.0) ++r.negative;
  }
  r.all_negative = r.negative == samples;
  const double w = q.w;
  r.psi_residual = std::fabs(psi(8.0 * w * w / 27.0, w) - 4.0 * w * w / 27.0);
  r.below_077 = r.threshold_constant < 0.77;
  return r;
}

OPFInvexReport check_opf_invex(const LineParams& params, bool cross_check,
                               int resolution) {
  const OPFInstance inst = build_opf_problem(params);
  OPFInvexReport r;
  r.invexity = check_boundary_invex(inst.problem);
  if (!cross_check) return r;
  const double step = 2e-3 * inst.problem.box().diagonal();
  const auto paths = trace_all_boundaries(inst.problem, step);
  r.kkt = find_kkt_points(inst.problem, paths);
  r.kt = verify_kt_invex(inst.problem, r.kkt,
                         grid_for(inst.problem, resolution), 1e-3);
  r.cross_checked = true;
  return r;
}

}  // namespace invex2d::opf
