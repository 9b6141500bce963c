#pragma once

#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "invex2d/invexity.hpp"
#include "invex2d/kkt.hpp"
#include "invex2d/oracle.hpp"
#include "invex2d/problem.hpp"

namespace invex2d::opf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One-line AC network in the (w^R, w^I) reduction. Injection bounds are
/// net of demand; an infinite bound drops that side.
struct LineParams {
  double g = 1.0;
  double b = -5.0;
  double w = 1.0;
  double s_u = 1.0;
  double c1 = 1.0;
  double c2 = 0.1;
  double p1_lo = -10.0, p1_hi = 10.0;
  double q1_lo = -10.0, q1_hi = 10.0;
  double p2_lo = -10.0, p2_hi = 10.0;
  double q2_lo = -10.0, q2_hi = 10.0;
  double v_lo = 0.95, v_hi = 1.05;
  double theta_lo = -std::numbers::pi / 6.0;
  double theta_hi = std::numbers::pi / 6.0;

  double y_abs2() const { return g * g + b * b; }
};

/// @throws PreconditionError naming the first violated parameter window.
void validate(const LineParams& params);

/// Power-flow expressions in x1 = w^R, x2 = w^I.
struct Flows {
  Expression p12, q12, p21, q21;
};
Flows flows(const LineParams& params);

struct OPFInstance {
  LineParams params;
  Flows flows;
  Problem2D problem;
};

/// Builds the instance: objective −(c1·p12 + c2·p21), thermal limits at
/// both ends (squared flow <= s_u), one-sided injection bounds, squared
/// voltage bounds and angle bounds. Box [−1.2m, 1.2m]², m = max(w, 1).
OPFInstance build_opf_problem(const LineParams& params);

struct MinWrReport {
  /// sqrt(v_lo²·w / (tan²θ_hi + 1)).
  double threshold = 0.0;
  double bound_sqrt = 0.0;    // 0.82·√w
  double bound_linear = 0.0;  // 0.77·w
  bool chain_holds = false;   // threshold >= 0.82√w >= 0.77w
  std::size_t grid_points = 0;
  std::size_t feasible_points = 0;
  /// Feasible grid points with w^R < 0.77w.
  std::size_t violations = 0;
  double min_feasible_wr = 0.0;
};

/// Grid scan for feasible points left of 0.77w plus the closed-form chain.
/// `resolution` is the number of grid points per axis over the OPF box.
MinWrReport min_wr_bound(const LineParams& params, int resolution = 2001);

enum class AuxKind { kWbound, kPbound, kQbound };
std::string_view to_string(AuxKind k);

struct AuxCandidate {
  double wr = 0.0;
  double wi = 0.0;
  double lambda = 0.0;
  /// wbound: w^R < 0; p/q bounds: w^R < w/2.
  bool below_bound = false;
  bool feasible = false;
};

struct AuxKKTReport {
  AuxKind kind = AuxKind::kWbound;
  std::vector<AuxCandidate> candidates;
  /// The closed-form system has no real solution with λ > 0.
  bool no_real_solution = false;
  std::string note;
};

/// Closed-form λ > 0 solutions of the auxiliary KKT system for the lower
/// voltage bound (wbound), bus-2 real power lower bound (pbound) or
/// bus-2 reactive power lower bound (qbound).
AuxKKTReport aux_kkt_points(const LineParams& params, AuxKind which);

struct ThermalReport {
  double threshold_constant = 0.0;  // 1/(3√3) + 0.5
  double threshold = 0.0;           // w · threshold_constant
  int samples = 0;
  int negative = 0;
  /// Largest finite-difference φ'' seen.
  double max_phi2 = 0.0;
  /// Largest gap between the finite-difference and closed-form φ''.
  double max_fd_error = 0.0;
  double psi_residual = 0.0;
  bool below_077 = false;
  bool all_negative = false;
};

/// Finite-difference concavity scan of φ above the threshold, the ψ
/// identity, and the threshold constant.
/// @throws PreconditionError when samples < 10.
ThermalReport thermal_convexity(const LineParams& params, int samples = 1000);

double phi(const LineParams& params, double wr);
/// Closed-form φ''(w^R) = 2w·a/R³ − 2 with a = 4s_u/|Y|.
double phi_second(const LineParams& params, double wr);
double psi(double x, double w);

struct OPFInvexReport {
  InvexityReport invexity;
  std::vector<KKTPoint> kkt;
  KTInvexVerdict kt;
  bool cross_checked = false;
};

/// Boundary-invexity of the instance, optionally cross-checked against the
/// grid oracle on `resolution` points per axis.
OPFInvexReport check_opf_invex(const LineParams& params,
                               bool cross_check = true,
                               int resolution = 801);

}  // namespace invex2d::opf
