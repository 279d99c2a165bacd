#pragma once

#include <vector>

#include "henon/log_coords.hpp"
#include "henon/radial.hpp"

namespace henon {

// Expansion u = a1 r + a2 + a3/r + O(e^{-cr}) on the N = 3 separatrix.
// Coefficients come twice: from moment integrals and from a least-squares
// tail fit against (r, 1, 1/r); the two must agree to ~1%.
struct AsymptoticsN3 {
  double a1 = 0, a2 = 0, a3 = 0;
  double a1_fit = 0, a2_fit = 0, a3_fit = 0;
  double fit_lo = 0, fit_hi = 0;
  double fit_residual = 0;    // max |u - fit| over the window
  double tail_bound = 0;      // bound on the truncated moment tails
  double refine_delta = 0;    // worst relative change under step halving
  double disagreement() const;  // max_i |a_i - a_i_fit| / |a_i|
};

AsymptoticsN3 coeffs_n3(const RadialProfile& separatrix);

// N = 4: u = -c0 ln r + ct + o(1) with c0 = (1/4) m3 and
// ct = (1/4) integral r^{3+alpha} ln r e^u dr; the energy identity forces
// c0 = 8 + 2 alpha.
struct AsymptoticsN4 {
  double c0 = 0;
  double ct = 0;
  double c0_expected = 0;      // 8 + 2 alpha
  double mass_integral = 0;    // 4 c0
  double refine_delta = 0;
  double tail_rel = 0;         // tail bound relative to the mass integral
};

AsymptoticsN4 mass_n4(const RadialProfile& separatrix);

// Gap u(r) + c0 ln r - ct of the N = 4 expansion at radius r.
double n4_tail_gap(const RadialProfile& prof, const AsymptoticsN4& asym,
                   double r);

// N >= 5 separatrix limit w -> 0 diagnostics over [r_hi/10, r_hi].
struct LimitN5 {
  double sup_w_tail = 0;   // sup |w| over the final decade
  double w_end = 0;
  double max_w_all = 0;    // max of w over the whole grid
  bool oscillatory = false;
  bool at_or_above_n_alpha = false;  // N >= N_alpha: w <= 0 must hold
  double nonpositivity_defect = 0;   // max(0, max_w_all), meaningful above N_alpha
};

LimitN5 check_limit_n5(const RadialProfile& separatrix, double r_hi = 0);

// Energy along the log-coordinate trajectory. N = 4 uses the conserved
//   E = w''' w' - w''^2/2 - 2 w'^2 - e^w,
// N >= 5 the monotone
//   E = w''' w' - w''^2/2 + 2(N-4) w'' w' + (N^2-10N+20)/2 w'^2
//       - e^{lambda0} (e^w - w - 1),  E' = 2(N-4) w''^2 + 2(N-2)(N-4) w'^2.
struct EnergyTrace {
  bool conservative = false;  // N = 4
  std::vector<std::pair<double, double>> samples;  // (s, E) in the window
  double drift = 0;                // N = 4: max |E - E0| / (1 + |E0|)
  double monotonicity_defect = 0;  // N >= 5: max consecutive decrease
  double final_value = 0;
  double limit_estimate = 0;  // N >= 5: E(s_f) plus fitted tail of E'
};

EnergyTrace energy_trace(const LogProfile& log, double s_lo = -1e300,
                         double s_hi = 1e300);

// Copy of a profile truncated at r_hi (appends the interpolated endpoint).
RadialProfile truncate_profile(const RadialProfile& prof, double r_hi);

}  // namespace henon
