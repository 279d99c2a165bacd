#pragma once

#include <string>
#include <utility>
#include <vector>

#include "henon/radial.hpp"

namespace henon {

enum class TrajectoryClass { kGlobal, kBlowUp, kUndecided };

// Margin classifier. BlowUp when Delta u crossed 0 or u hit the threshold
// (both irreversible); Global when Delta u(r_max) <= -1e-4 |beta|; Undecided
// in between.
TrajectoryClass classify(const RadialProfile& prof);

// Rigorous global certificate by the comparison principle: constructs an
// explicit supersolution dominating the trajectory data at an anchor radius
// whose differential inequality is verified in closed form past the anchor.
// Fires only for trajectories that have visibly departed below the
// separatrix; returns false when no admissible anchor exists.
bool supersolution_certificate(const RadialProfile& prof);

struct ShootOptions {
  double tol_beta = 0.0;        // absolute bracket width; 0: use tol_beta_rel
  double tol_beta_rel = 1e-10;  // bracket <= tol_beta_rel * max(1, |beta_low|)
  double r_max = 1e3;
  double r_max_cap = 1e5;
  bool allow_survival_heuristic = true;
  IntegrateOptions integ;
};

struct ShootResult {
  ProblemParams params;  // beta field ignored
  double beta0 = 0.0;
  double beta_low = 0.0;
  double beta_high = 0.0;
  int iterations = 0;
  double r_max_used = 0.0;
  // Which rule certified the global endpoint: "margin", "supersolution",
  // or "survived-cap" (heuristic, flagged).
  std::string low_certificate;
  bool heuristic_used = false;
  RadialProfile global_witness;
  RadialProfile blowup_witness;
  // (beta, class) pairs in bisection order, for the monotonicity property.
  std::vector<std::pair<double, TrajectoryClass>> history;
};

// Locates beta0 = sup{beta : R_beta = infinity} by bisection. beta_high
// starts at 0 (blow-up side), beta_low by doubling downward from -1 until a
// global trajectory is certified. Undecided outcomes escalate r_max
// (doubling, capped); at the cap the supersolution certificate and then the
// flagged survival heuristic resolve. Throws NoEntireSolution for N <= 2 and
// InconclusiveBracket when resolution is disabled and the cap is reached.
ShootResult find_beta0(const ProblemParams& params_template,
                       const ShootOptions& opts = {});

struct SeparatrixOptions {
  double r_target = 1e4;    // radius the returned profile must reach
  double r_probe = 4096.0;  // initial probe radius for refinement
  double r_probe_cap = 3e5;
  double tol_beta_abs = 0.0;  // 0: refine to ~8 ulp
  double r_gate = 32.0;       // departure rules apply beyond this radius
  int max_iterations = 200;
  IntegrateOptions integ;
};

struct Separatrix {
  double beta0 = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  RadialProfile profile;  // best near-separatrix trajectory
  double faithful_r = 0.0;  // no departure detected below this radius
  ShootResult shoot;        // phase-1 result
  int refine_iterations = 0;
  std::string notes;
};

// Phase-1 shooting followed by departure-sign refinement in the asymptote
// chart: blow-up side by the Delta u zero crossing, global side by the fall
// of the trajectory below the separatrix envelope (w-chart for N >= 5,
// r^2 Delta u for N = 4, r Delta u for N = 3).
Separatrix compute_separatrix(const ProblemParams& params_template,
                              const ShootOptions& shoot_opts = {},
                              const SeparatrixOptions& sep_opts = {});

struct BoundsReport {
  double margin_lower_quadratic = 0.0;  // min of u - beta r^2/(2N)
  double margin_upper_quadratic = 0.0;  // min of -(beta0-beta) r^2/(2N) - u
  double margin_log = 0.0;       // min of (c_log - (4+alpha) ln r) - u
  double c_log = 0.0;            // constant used by the log bound
  double margin_pointwise_mass = 0.0;  // min of -beta0 (2+a)(N+a) - r^{2+a} e^u
  double worst() const;
};

// Signed worst-case margins of the a-priori bounds along a global profile
// with beta <= beta0. c_log is the additive constant of the logarithmic
// upper bound (see stability::log_bound_constant).
BoundsReport verify_bounds(const RadialProfile& prof, double beta0,
                           double c_log);

}  // namespace henon
