#pragma once

#include <vector>

#include "henon/dopri5.hpp"
#include "henon/types.hpp"

namespace henon {

struct Sample2 {
  double r = 0, u = 0, du = 0;
};

struct Profile2 {
  SecondOrderParams params;
  std::vector<Sample2> samples;
  StepStats stats;
  double r_start = 0;

  double r_last() const { return samples.back().r; }
  Sample2 at(double r) const;  // Hermite between checkpoints
  double u_at(double r) const { return at(r).u; }
};

// Radial integration of Delta u + r^alpha e^u = 0, u(0) = u0, u'(0) = 0.
// Solutions are decreasing and global; no blow-up handling is needed.
Profile2 integrate2(const SecondOrderParams& p, double r_max,
                    const IntegrateOptions& opts = {});

// Exact singular solution U = -(2+alpha) ln r + ln[(2+alpha)(N-2)], N >= 3.
double singular_u(int dim, double alpha, double r);
// |Delta U + r^alpha e^U| evaluated from the closed form at radius r.
double singular_residual(int dim, double alpha, double r);

// (2+alpha)(N-2) against the Hardy constant (N-2)^2/4:
// N >= 10 + 4 alpha (<=) gives the stable singular solution.
enum class SingularStability { kStableSingular, kUnstableAtInfinitySingular };
SingularStability threshold2(int dim, double alpha);

// Sphere solution of Delta u + e^u = 0 in the plane (N = 2, alpha = 0).
double sphere_u(double r, double lambda);
double sphere_residual(double r, double lambda);

// Discrete second-order Hardy form on the annulus (r1, r2):
//   integral (phi')^2 r^{N-1} dr - c integral phi^2 r^{N-3} dr
// over phi vanishing at both ends; returns the smallest eigenvalue against
// the r^{N-3} mass and the minimizer. Geometric grid, so the quotient is
// exactly invariant under annulus scaling.
struct Witness2 {
  std::vector<double> r, phi;
  double quotient = 0;        // min Q(phi) / integral phi^2 r^{N-3}
  double q_independent = 0;   // trapezoid re-quadrature
  bool negative = false;
};

Witness2 hardy1d_min(int dim, double c, double r1, double r2, int grid = 1024);

// Instability witness for the singular solution on (R, 16R), valid for
// 10 <= N < 10 + 4 alpha; throws PreconditionError outside that range.
Witness2 witness2(int dim, double alpha, double R, int grid = 1024);

// |u(r_last) + (2+alpha) ln r_last - ln[(2+alpha)(N-2)]|: distance of a
// regular solution from the singular profile at the grid end.
double singular_limit_gap(const Profile2& prof);

}  // namespace henon
