#pragma once

#include "henon/radial.hpp"

namespace henon {

// Moments of the trajectory measure:
//   integral over (0, r_last) of r^{k+alpha} (ln r)^{0|1} e^{u(r)} dr.
// Composite Simpson per checkpoint interval (midpoints from the Hermite
// interpolant) with `subdiv` splits per interval, plus the closed-form series
// head over (0, r_start).
double profile_moment(const RadialProfile& prof, double k, bool log_factor,
                      int subdiv = 1);

// Tail bound for the same moment over (r_last, infinity) under a linear decay
// model u(r) <= u(R) + u'(R)(r - R) (valid when u is concave past R, the
// N = 3 regime). Returns +inf when the model does not apply.
double moment_tail_bound_exp(const RadialProfile& prof, double k);

// Tail bound under the power decay model u(r) <= u(R) + R u'(R) ln(r/R)
// (valid when w = u + (4+alpha)s is concave in s, the N = 4 regime).
double moment_tail_bound_power(const RadialProfile& prof, double k,
                               bool log_factor);

// Max relative defect over the checkpoints of the exact identity
//   (Delta u)'(r) r^{N-1} = integral_0^r s^{N-1+alpha} e^u ds.
double quadrature_identity_defect(const RadialProfile& prof);

}  // namespace henon
