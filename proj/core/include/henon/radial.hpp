#pragma once

#include <array>
#include <vector>

#include "henon/dopri5.hpp"
#include "henon/types.hpp"

namespace henon {

// First-order reduction of the radial bilaplacian at radius r:
//   u' = du, du' = lap - (N-1) du / r, lap' = dlap,
//   dlap' = r^alpha e^u - (N-1) dlap / r.
struct RadialState {
  double r = 0.0;
  double u = 0.0;
  double du = 0.0;    // u'
  double lap = 0.0;   // Delta u
  double dlap = 0.0;  // (Delta u)'
};

// Derivative of (u, du, lap, dlap) with respect to r. Raises BlowUpSignal
// instead of evaluating e^u once u exceeds the blow-up threshold.
std::array<double, 4> rhs(const RadialState& s, const ProblemParams& p);

// Particular-solution denominator K = (4+a)(2+a)(N+2+a)(N+a) of
// Delta^2(r^{4+alpha}) = K r^alpha.
double series_k(int dim, double alpha);

// Truncated expansion near the regular-singular origin,
//   u = delta + beta r^2/(2N) + e^delta r^{4+alpha}/K + O(r^{6+alpha}),
// with consistent du, lap, dlap. Valid for 0 < r_start << 1.
RadialState series_start(const ProblemParams& p, double r_start);

// Magnitude of the first omitted series term at r (truncation error bound).
double series_truncation(const ProblemParams& p, double r);

struct RunStatus {
  enum Kind { kGlobal, kBlowUp } kind = kGlobal;
  double r_reached = 0.0;       // radius of the last computed state
  bool lap_crossed = false;     // Delta u reached 0 from below
  double lap_cross_r = 0.0;     // first radius with Delta u >= 0
  bool threshold_hit = false;   // u reached u_blowup
};

struct RadialProfile {
  ProblemParams params;
  std::vector<RadialState> samples;  // strictly increasing r, geometric
  RunStatus status;
  IntegrateOptions opts;
  StepStats stats;

  double r_first() const { return samples.front().r; }
  double r_last() const { return samples.back().r; }
  bool global() const { return status.kind == RunStatus::kGlobal; }

  // Cubic Hermite interpolation between checkpoints (exact at samples).
  RadialState at(double r) const;
  double u_at(double r) const { return at(r).u; }
};

// Integrates the IVP from r_start to r_max. The run terminates early with a
// BlowUp status when u reaches u_blowup; a Delta u zero crossing is recorded
// and the trajectory is followed until the threshold (or r_max) to estimate
// the blow-up radius. Throws IntegrationStall on step underflow.
RadialProfile integrate(const ProblemParams& p, double r_max,
                        const IntegrateOptions& opts = {});

// u_lambda(x) = u(lambda x) + (4+alpha) ln lambda applied to a computed
// profile; initial data map to delta + (4+alpha) ln lambda and lambda^2 beta.
RadialProfile scale_solution(const RadialProfile& prof, double lambda);

// Worst sample-to-sample decrease of Delta u (>= 0 means monotone).
double lap_monotonicity_defect(const RadialProfile& prof);

// Max relative defect of the 4th-order finite-difference reconstruction of
// Delta u from the u samples (interior checkpoints only).
double laplacian_reconstruction_defect(const RadialProfile& prof);

}  // namespace henon
