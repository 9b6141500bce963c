#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "report.hpp"

#ifndef INVEX2D_VERSION
#define INVEX2D_VERSION "0.0.0"
#endif

namespace invex2d::cli {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Options {
  std::string file;
  double step = 0.0;
  std::string out;
  std::string mode;
  int grid = 0;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string verify = "all";
  opf::LineParams params;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("invex2d", sink);
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("INVEX2D_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else if (level == "info") {
    log->set_level(spdlog::level::info);
  } else {
    log->set_level(spdlog::level::err);
    if (level != "error") log->error("unknown INVEX2D_LOG level '{}', using error", level);
  }
  return log;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt_point(Point2 x) {
  std::ostringstream s;
  s << std::setprecision(10) << "(" << x.x1 << ", " << x.x2 << ")";
  return s.str();
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::kBoundaryInvex:
    case Verdict::kWeaklyBoundaryInvex: return kPassed;
    case Verdict::kViolated: return kViolated;
    case Verdict::kInconclusive: return kErrorOrInconclusive;
  }
  return kErrorOrInconclusive;
}

// Shared state for one invocation.
struct Context {
  Options opt;
  Json report;
  Json timings = Json::object();
  std::ostringstream text;
  spdlog::logger* log = nullptr;
};

int cmd_trace(Context& c, const Problem2D& p) {
  const auto t0 = Clock::now();
  const auto paths = trace_all_boundaries(p, c.opt.step);
  c.timings["trace"] = ms_since(t0);
  c.log->info("traced {} boundary component(s)", paths.size());
  Json js = Json::array();
  bool ok = !paths.empty();
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const Json j = to_json(paths[k]);
    ok = ok && paths[k].closed && j["simple"].get<bool>();
    js.push_back(j);
    c.text << "component " << k << ": " << paths[k].nodes.size() << " nodes, length "
           << std::setprecision(10) << paths[k].length << ", "
           << (paths[k].closed ? "closed" : "open") << ", " << paths[k].corner_count()
           << " corner(s)" << (j["simple"].get<bool>() ? "" : ", self-intersecting") << "\n";
  }
  c.report["paths"] = js;
  if (!c.opt.out.empty()) {
    std::ofstream csv(c.opt.out);
    if (!csv) throw Error("cannot write " + c.opt.out);
    csv << "t,x1,x2,active,corner\n" << std::setprecision(17);
    double offset = 0.0;
    for (const auto& path : paths) {
      for (const auto& n : path.nodes) {
        csv << offset + n.t << "," << n.point.x1 << "," << n.point.x2 << ","
            << p.constraint(n.active).name << "," << (n.is_corner ? 1 : 0) << "\n";
      }
      offset += path.length;
    }
    c.report["csv"] = c.opt.out;
  }
  return ok ? kPassed : kErrorOrInconclusive;
}

int cmd_kkt(Context& c, const Problem2D& p) {
  auto t0 = Clock::now();
  const auto paths = trace_all_boundaries(p, c.opt.step);
  c.timings["trace"] = ms_since(t0);
  t0 = Clock::now();
  KKTSearchOptions ko;
  ko.seed = c.opt.seed;
  const auto kkt = find_kkt_points(p, paths, ko);
  c.timings["kkt"] = ms_since(t0);
  Json js = Json::array();
  for (const auto& k : kkt) {
    js.push_back(to_json(p, k));
    c.text << fmt_point(k.location) << "  f = " << std::setprecision(10) << k.objective_value
           << "  " << to_string(k.classification);
    for (const auto& [i, mu] : k.multipliers) {
      c.text << "  mu[" << p.constraint(i).name << "] = " << mu;
    }
    c.text << "\n";
  }
  c.report["kkt_points"] = js;
  c.text << kkt.size() << " KKT point(s)\n";
  return kPassed;
}

int cmd_check(Context& c, const Problem2D& p) {
  const auto t0 = Clock::now();
  int code = kErrorOrInconclusive;
  if (c.opt.mode == "weak" || c.opt.mode == "boundary") {
    const InvexityReport r = c.opt.mode == "weak" ? check_weak(p) : check_boundary_invex(p);
    c.report["check"] = to_json(p, r);
    c.text << "verdict: " << to_string(r.verdict) << "\n";
    for (const auto& w : r.witnesses) {
      c.text << "witness " << fmt_point(w.point.location) << " on "
             << p.constraint(w.constraint).name << "  lambda = " << w.point.lambda << "\n";
    }
    code = verdict_code(r.verdict);
  } else {
    const auto paths = trace_all_boundaries(p, c.opt.step);
    KKTSearchOptions ko;
    ko.seed = c.opt.seed;
    const auto kkt = find_kkt_points(p, paths, ko);
    const KTInvexVerdict v = verify_kt_invex(p, kkt, grid_for(p, c.opt.grid ? c.opt.grid : 801));
    Json kj = Json::array();
    for (const auto& k : kkt) kj.push_back(to_json(p, k));
    c.report["kkt_points"] = kj;
    c.report["check"] = to_json(v);
    c.report["check"]["verdict"] = v.kt_invex ? "kt-invex" : "violated";
    c.text << "verdict: " << (v.kt_invex ? "kt-invex" : "violated") << "\n"
           << "global max " << std::setprecision(10) << v.global_value << " at "
           << fmt_point(v.global_point) << "\n";
    for (std::size_t i : v.violators) {
      c.text << "witness " << fmt_point(kkt[i].location) << "  gap = " << v.gaps[i] << "\n";
    }
    code = v.kt_invex ? kPassed : kViolated;
  }
  c.timings["check"] = ms_since(t0);
  return code;
}

int cmd_oracle(Context& c, const Problem2D& p) {
  const auto t0 = Clock::now();
  const OracleResult r = grid_global_max(p, grid_for(p, c.opt.grid ? c.opt.grid : 801));
  c.timings["oracle"] = ms_since(t0);
  c.report["oracle"] = to_json(r);
  c.text << "global max " << std::setprecision(12) << r.best_value << " at "
         << fmt_point(r.best_point) << " (" << r.feasible_count << " of " << r.total_count
         << " grid points feasible)\n";
  return kPassed;
}

int cmd_opf(Context& c) {
  const opf::LineParams& q = c.opt.params;
  opf::validate(q);
  const std::string& v = c.opt.verify;
  const bool all = v == "all";
  int code = kPassed;
  auto fail = [&code](int k) { code = std::max(code, k); };
  Json res = Json::object();

  if (all || v == "min-wr") {
    const auto t0 = Clock::now();
    const opf::MinWrReport r = opf::min_wr_bound(q, c.opt.grid ? c.opt.grid : 2001);
    c.timings["min_wr"] = ms_since(t0);
    const bool ok = r.violations == 0 && r.chain_holds;
    res["min_wr"] = to_json(r);
    res["min_wr"]["passed"] = ok;
    c.text << "min-wr: " << (ok ? "pass" : "FAIL") << "  threshold " << std::setprecision(8)
           << r.threshold << ", " << r.feasible_points << " feasible grid points, "
           << r.violations << " below 0.77w\n";
    if (!ok) fail(kViolated);
  }
  if (all || v == "aux-kkt") {
    const auto t0 = Clock::now();
    Json arr = Json::array();
    bool ok = true;
    for (auto kind : {opf::AuxKind::kWbound, opf::AuxKind::kPbound, opf::AuxKind::kQbound}) {
      const opf::AuxKKTReport r = opf::aux_kkt_points(q, kind);
      for (const auto& cand : r.candidates) ok = ok && cand.below_bound && !cand.feasible;
      arr.push_back(to_json(r));
      c.text << "aux-kkt " << to_string(kind) << ": ";
      if (r.no_real_solution) {
        c.text << "no candidate (" << r.note << ")\n";
      } else {
        for (const auto& cand : r.candidates) {
          c.text << fmt_point({cand.wr, cand.wi}) << " lambda = " << cand.lambda
                 << (cand.feasible ? " feasible" : " infeasible") << " ";
        }
        c.text << "\n";
      }
    }
    c.timings["aux_kkt"] = ms_since(t0);
    res["aux_kkt"] = {{"passed", ok}, {"systems", arr}};
    if (!ok) fail(kViolated);
  }
  if (all || v == "thermal") {
    const auto t0 = Clock::now();
    const opf::ThermalReport r = opf::thermal_convexity(q);
    c.timings["thermal"] = ms_since(t0);
    const bool ok = r.all_negative && r.psi_residual < 1e-10 && r.below_077;
    res["thermal"] = to_json(r);
    res["thermal"]["passed"] = ok;
    c.text << "thermal: " << (ok ? "pass" : "FAIL") << "  threshold constant "
           << std::setprecision(8) << r.threshold_constant << ", " << r.negative << "/"
           << r.samples << " samples concave, psi residual " << r.psi_residual << "\n";
    if (!ok) fail(kViolated);
  }
  if (all || v == "invex") {
    const auto t0 = Clock::now();
    const opf::OPFInvexReport r = opf::check_opf_invex(q, true, c.opt.grid ? c.opt.grid : 801);
    c.timings["invex"] = ms_since(t0);
    const opf::OPFInstance inst = opf::build_opf_problem(q);
    Json j = to_json(inst.problem, r.invexity);
    Json kj = Json::array();
    for (const auto& k : r.kkt) kj.push_back(to_json(inst.problem, k));
    j["kkt_points"] = kj;
    j["kt"] = to_json(r.kt);
    res["invex"] = j;
    c.text << "invex: " << to_string(r.invexity.verdict) << ", KT-invex "
           << (r.kt.kt_invex ? "yes" : "no") << ", max gap " << r.kt.max_gap << "\n";
    const int vc = verdict_code(r.invexity.verdict);
    fail(vc == kPassed && !r.kt.kt_invex ? kViolated : vc);
  }
  c.report["opf"] = res;
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  Context c;
  auto logger = make_logger(err);
  c.log = logger.get();
  Options& o = c.opt;

  CLI::App app{"Kuhn-Tucker invexity toolkit for two-variable programs", "invex2d"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", INVEX2D_VERSION);
  app.add_option("--seed", o.seed, "Seed for randomized restarts")->capture_default_str();
  app.add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto* trace = app.add_subcommand("trace", "Trace the boundary of the feasible set");
  trace->add_option("file", o.file, "Problem file")->required()->check(CLI::ExistingFile);
  trace->add_option("--step", o.step, "Predictor step (default 1e-2 x box diagonal)")
      ->check(CLI::PositiveNumber);
  trace->add_option("--out", o.out, "CSV output path");

  auto* kkt = app.add_subcommand("kkt", "Find and classify KKT points");
  kkt->add_option("file", o.file, "Problem file")->required()->check(CLI::ExistingFile);
  kkt->add_option("--step", o.step, "Tracing step")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Invexity checks");
  check->add_option("file", o.file, "Problem file")->required()->check(CLI::ExistingFile);
  check->add_option("--mode", o.mode, "Check to run")
      ->required()
      ->check(CLI::IsMember({"weak", "boundary", "kt-empirical"}));
  check->add_option("--grid", o.grid, "Oracle grid resolution")->check(CLI::Range(2, 20001));
  check->add_option("--step", o.step, "Tracing step")->check(CLI::PositiveNumber);

  auto* orc = app.add_subcommand("oracle", "Grid global maximum");
  orc->add_option("file", o.file, "Problem file")->required()->check(CLI::ExistingFile);
  orc->add_option("--grid", o.grid, "Grid resolution")->check(CLI::Range(2, 20001));

  auto* op = app.add_subcommand("opf", "One-line AC power flow demonstration");
  opf::LineParams& q = o.params;
  op->add_option("--g", q.g, "Line conductance")->capture_default_str();
  op->add_option("--b", q.b, "Line susceptance")->capture_default_str();
  op->add_option("--w", q.w, "Squared voltage magnitude at bus 1")->capture_default_str();
  op->add_option("--su", q.s_u, "Thermal limit")->capture_default_str();
  op->add_option("--c1", q.c1, "Cost coefficient at bus 1")->capture_default_str();
  op->add_option("--c2", q.c2, "Cost coefficient at bus 2")->capture_default_str();
  op->add_option("--p1-lo", q.p1_lo)->capture_default_str();
  op->add_option("--p1-hi", q.p1_hi)->capture_default_str();
  op->add_option("--q1-lo", q.q1_lo)->capture_default_str();
  op->add_option("--q1-hi", q.q1_hi)->capture_default_str();
  op->add_option("--p2-lo", q.p2_lo)->capture_default_str();
  op->add_option("--p2-hi", q.p2_hi)->capture_default_str();
  op->add_option("--q2-lo", q.q2_lo)->capture_default_str();
  op->add_option("--q2-hi", q.q2_hi)->capture_default_str();
  op->add_option("--v-lo", q.v_lo, "Lower voltage bound at bus 2")->capture_default_str();
  op->add_option("--v-hi", q.v_hi, "Upper voltage bound at bus 2")->capture_default_str();
  op->add_option("--theta-lo", q.theta_lo, "Lower angle bound (rad)")->capture_default_str();
  op->add_option("--theta-hi", q.theta_hi, "Upper angle bound (rad)")->capture_default_str();
  op->add_option("--verify", o.verify, "Verification to run")
      ->check(CLI::IsMember({"min-wr", "aux-kkt", "thermal", "invex", "all"}))
      ->capture_default_str();
  op->add_option("--grid", o.grid, "Grid resolution (min-wr default 2001, invex 801)")
      ->check(CLI::Range(2, 20001));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPassed;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPassed;
  } catch (const CLI::CallForVersion&) {
    out << INVEX2D_VERSION << "\n";
    return kPassed;
  } catch (const CLI::ParseError& e) {
    err << "invex2d: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kUsage;
  }

  std::string command;
  for (std::size_t i = 1; i < args.size(); ++i) command += (i > 1 ? " " : "") + args[i];
  const CLI::App* sub = app.get_subcommands().front();
  c.report["tool"] = "invex2d";
  c.report["version"] = INVEX2D_VERSION;
  c.report["command"] = command;
  c.report["subcommand"] = sub->get_name();
  c.report["seed"] = o.seed;

  int code = kErrorOrInconclusive;
  try {
    if (sub == op) {
      c.report["input_digest"] = hex(fnv1a(to_json(q).dump()));
      c.report["params"] = to_json(q);
      code = cmd_opf(c);
    } else {
      const std::string doc = read_file(o.file);
      c.report["input"] = o.file;
      c.report["input_digest"] = hex(fnv1a(doc));
      auto t0 = Clock::now();
      const Problem2D p = load_problem(doc);
      c.timings["load"] = ms_since(t0);
      for (const auto& w : p.warnings()) c.log->info("{}", w);
      if (sub == trace) code = cmd_trace(c, p);
      if (sub == kkt) code = cmd_kkt(c, p);
      if (sub == check) code = cmd_check(c, p);
      if (sub == orc) code = cmd_oracle(c, p);
      if (!p.warnings().empty()) c.report["warnings"] = p.warnings();
    }
  } catch (const std::exception& e) {
    c.log->debug("{} failed", sub->get_name());
    err << "invex2d: " << e.what() << "\n";
    c.report["error"] = e.what();
    code = kErrorOrInconclusive;
    if (o.format == "json") {
      c.timings["total"] = ms_since(start);
      c.report["timings_ms"] = c.timings;
      c.report["exit_code"] = code;
      out << c.report.dump(2) << "\n";
    }
    return code;
  }
  c.timings["total"] = ms_since(start);
  c.report["timings_ms"] = c.timings;
  c.report["exit_code"] = code;
  if (o.format == "json") {
    out << c.report.dump(2) << "\n";
  } else {
    out << c.text.str();
  }
  return code;
}

}  // namespace invex2d::cli
