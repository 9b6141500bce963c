#include "report.hpp"

namespace invex2d::cli {

Json to_json(Point2 x) { return Json::array({x.x1, x.x2}); }

Json to_json(const Problem2D& p, const KKTPoint& k) {
  Json m = Json::object();
  for (const auto& [i, mu] : k.multipliers) m[p.constraint(i).name] = mu;
  Json active = Json::array();
  for (std::size_t i : k.active.indices) active.push_back(p.constraint(i).name);
  return {{"location", to_json(k.location)},
          {"objective", k.objective_value},
          {"classification", to_string(k.classification)},
          {"active", active},
          {"multipliers", m},
          {"residual", k.residual}};
}

namespace {

Json point_json(const AuxiliaryStationaryPoint& a) {
  return {{"location", to_json(a.location)},
          {"lambda", a.lambda},
          {"objective", a.f_value},
          {"curve_second_derivative", a.curve_second_derivative},
          {"global_min_candidate", a.is_global_min_candidate},
          {"residual", a.residual}};
}

Json clause_json(const ClauseEvaluation& c) {
  return {{"infeasible", c.infeasible},
          {"not_strict", c.not_strict},
          {"nonnegative_multiplier", c.nonnegative_lambda},
          {"other_constraint_active", c.other_active},
          {"local_max", c.local_max},
          {"satisfied", c.satisfied},
          {"satisfied_by", c.satisfied_by},
          {"inconclusive", c.inconclusive}};
}

}  // namespace

Json to_json(const Problem2D& p, const InvexityReport& r) {
  Json cs = Json::array();
  for (const auto& c : r.constraints) {
    Json pts = Json::array();
    for (const auto& e : c.points) {
      Json j = point_json(e.point);
      j["clauses"] = clause_json(e.clauses);
      pts.push_back(std::move(j));
    }
    cs.push_back({{"name", c.name},
                  {"nonconvex", c.nonconvex},
                  {"min_hessian_eigenvalue", c.min_hessian_eigenvalue},
                  {"curve_found", c.curve_found},
                  {"unbounded_in_box", c.unbounded_in_box},
                  {"passed", c.passed},
                  {"inconclusive", c.inconclusive},
                  {"points", pts},
                  {"notes", c.notes}});
  }
  Json ws = Json::array();
  for (const auto& w : r.witnesses) {
    Json j = point_json(w.point);
    j["constraint"] = p.constraint(w.constraint).name;
    j["clauses"] = clause_json(w.clauses);
    ws.push_back(std::move(j));
  }
  return {{"verdict", to_string(r.verdict)}, {"constraints", cs}, {"witnesses", ws}};
}

Json to_json(const OracleResult& r) {
  return {{"best_point", to_json(r.best_point)},
          {"best_value", r.best_value},
          {"grid_point", to_json(r.grid_point)},
          {"grid_value", r.grid_value},
          {"feasible_count", r.feasible_count},
          {"total_count", r.total_count}};
}

Json to_json(const KTInvexVerdict& v) {
  return {{"kt_invex", v.kt_invex},
          {"global_value", v.global_value},
          {"global_point", to_json(v.global_point)},
          {"gaps", v.gaps},
          {"max_gap", v.max_gap},
          {"violators", v.violators}};
}

Json to_json(const BoundaryPath& path) {
  return {{"nodes", path.nodes.size()},
          {"closed", path.closed},
          {"length", path.length},
          {"step", path.step},
          {"closure_gap", path.closure_gap()},
          {"corners", path.corner_count()},
          {"simple", path.nodes.size() >= 3 && is_simple(path)}};
}

Json to_json(const opf::LineParams& q) {
  auto num = [](double v) -> Json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
  };
  return {{"g", q.g},         {"b", q.b},
          {"w", q.w},         {"su", q.s_u},
          {"c1", q.c1},       {"c2", q.c2},
          {"p1_lo", num(q.p1_lo)}, {"p1_hi", num(q.p1_hi)},
          {"q1_lo", num(q.q1_lo)}, {"q1_hi", num(q.q1_hi)},
          {"p2_lo", num(q.p2_lo)}, {"p2_hi", num(q.p2_hi)},
          {"q2_lo", num(q.q2_lo)}, {"q2_hi", num(q.q2_hi)},
          {"v_lo", q.v_lo},   {"v_hi", q.v_hi},
          {"theta_lo", q.theta_lo}, {"theta_hi", q.theta_hi}};
}

Json to_json(const opf::MinWrReport& r) {
  return {{"threshold", r.threshold},
          {"bound_sqrt", r.bound_sqrt},
          {"bound_linear", r.bound_linear},
          {"chain_holds", r.chain_holds},
          {"grid_points", r.grid_points},
          {"feasible_points", r.feasible_points},
          {"violations", r.violations},
          {"min_feasible_wr", r.feasible_points ? Json(r.min_feasible_wr) : Json()}};
}

Json to_json(const opf::AuxKKTReport& r) {
  Json cs = Json::array();
  for (const auto& c : r.candidates) {
    cs.push_back({{"wr", c.wr},
                  {"wi", c.wi},
                  {"lambda", c.lambda},
                  {"below_bound", c.below_bound},
                  {"feasible", c.feasible}});
  }
  return {{"kind", to_string(r.kind)},
          {"no_real_solution", r.no_real_solution},
          {"note", r.note},
          {"candidates", cs}};
}

Json to_json(const opf::ThermalReport& r) {
  return {{"threshold_constant", r.threshold_constant},
          {"threshold", r.threshold},
          {"samples", r.samples},
          {"negative", r.negative},
          {"max_phi2", r.max_phi2},
          {"max_fd_error", r.max_fd_error},
          {"psi_residual", r.psi_residual},
          {"below_077", r.below_077},
          {"all_negative", r.all_negative}};
}

}  // namespace invex2d::cli
