#pragma once

#include <functional>
#include <string>
#include <vector>

#include "henon/banded.hpp"
#include "henon/radial.hpp"

namespace henon {

// Unique root in (5, inf) of f(s) = s^2(s-4) - 32(4+alpha)(s-2), the
// dimension threshold: at or above it every entire radial solution is stable.
double n_alpha(double alpha);

// Hardy weight w_N: N = 4 needs r > 1 (weight 1/(4 r^4 ln^2 r)); otherwise
// N^2(N-4)^2/(16 r^4).
double hardy_weight(int dim, double r);

// inf over samples with r >= r_from of w_N(r) - r^alpha e^u. A nonnegative
// value from r_start certifies stability; from a finite r_from, stability
// outside a compact set.
double hardy_margin(const RadialProfile& prof, double r_from);

// Smallest sample radius from which the Hardy tail margin is nonnegative
// (>= 1 for N <= 4 where the inequality holds outside the unit ball);
// +inf when no suffix of the grid qualifies.
double hardy_tail_radius(const RadialProfile& prof);

// Roots of Q_N(nu) = P_N(nu) - e^{lambda0}, P_N(nu) = nu(nu-2)(nu+N-2)(nu+N-4),
// via the symmetry reduction t = (nu - nu*)^2, nu* = -(N-4)/2. Four real
// roots nu1 > 0 > nu2 >= nu3 > nu4 exist iff N >= N_alpha.
struct QnRoots {
  bool four_real = false;
  double nu_star = 0;
  double nu1 = 0, nu2 = 0, nu3 = 0, nu4 = 0;
  double t_minus = 0;  // discriminant status: negative when N < N_alpha
  double residual = 0; // max |Q_N(nu_i)| over returned roots
};
QnRoots qn_roots(int dim, double alpha);

enum class EndCondition { kOrigin, kClamped, kHinged };

struct EigOptions {
  int grid = 1024;
  bool log_spacing = false;  // set for wide annuli
  bool refine_check = true;  // recompute at 2x grid, flag NotConverged
};

struct EigResult {
  double lambda = 0;
  bool converged = true;
  double refined_lambda = 0;
  std::vector<double> r;    // unknown nodes
  std::vector<double> phi;  // B-normalized eigenvector
  double q_value = 0;             // assembled-quadrature Rayleigh quotient
  double q_independent = 0;       // trapezoid re-quadrature of the same phi
};

// Smallest eigenvalue of the radial quadratic form
//   Q(phi) = integral (Delta phi)^2 r^{N-1} dr - integral P(r) phi^2 r^{N-1} dr
// over (r_a, r_b), normalized by integral phi^2 r^{N-1} dr. Ends are clamped
// (phi = phi' = 0); r_a = 0 uses the natural symmetry conditions instead.
EigResult min_eig_potential(int dim, double r_a, double r_b,
                            const std::function<double(double)>& potential,
                            const EigOptions& opts = {});

// Same form with the trajectory potential r^alpha e^u (the weight measure is
// integrated exactly per cell, so alpha in (-2,0) is handled at the origin).
EigResult min_eig(const RadialProfile& prof, double r_a, double r_b,
                  const EigOptions& opts = {});

// ln(lambda*) where lambda* is the first eigenvalue of the weighted Navier
// problem Delta^2 phi = lambda |x|^alpha phi on the unit ball: the additive
// constant of the logarithmic upper bound on u.
double log_bound_constant(int dim, double alpha, int grid = 2048);

// Explicit Hardy-sufficient stability level: the minimum over r > 0 of
// Phi(r) = (2N/r^2) ln(N^2(N-4)^2 / (16 r^{4+alpha})) + beta0 (closed form).
double beta_prime(int dim, double alpha, double beta0);

enum class StabilityClass { kStable, kStableAtInfinity, kUnstableAtInfinity };

struct StabilityReport {
  StabilityClass classification = StabilityClass::kStable;
  double hardy_margin_global = 0;
  double hardy_margin_tail = 0;
  double tail_radius = 0;  // +inf when no tail certificate exists on the grid
  double min_eig_value = 0;
  double eig_domain_lo = 0, eig_domain_hi = 0;
  bool eig_converged = true;
  bool has_witness = false;
  std::vector<double> witness_r, witness_phi;
  double witness_q_independent = 0;
  std::string certificate;
};

StabilityReport classify_stability(const RadialProfile& prof,
                                   const EigOptions& opts = {});

struct Beta1Options {
  double tol_rel = 1e-4;  // bracket tolerance relative to |beta0|
  double r_max = 1e3;
  EigOptions eig;
  IntegrateOptions integ;
};

struct Beta1Result {
  double beta1 = 0;
  double lo = 0, hi = 0;
  double beta_prime_start = 0;
  double beta1_hardy = 0;      // where the global Hardy margin flips sign
  double certificate_gap = 0;  // beta1 - beta1_hardy
  int iterations = 0;
  std::string lo_certificate, hi_certificate;
};

// Stability boundary beta1 in (beta_prime, beta0) for 5 <= N < N_alpha:
// stable side by the global Hardy margin or (eigenvalue >= 0 on the compact
// part + Hardy tail certificate); unstable side by a negative eigenvalue.
Beta1Result find_beta1(const ProblemParams& params_template, double beta0,
                       const Beta1Options& opts = {});

}  // namespace henon
