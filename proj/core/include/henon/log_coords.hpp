#pragma once

#include <vector>

#include "henon/radial.hpp"

namespace henon {

// Limit value of u(r) + (4+alpha) ln r on the separatrix, N >= 5:
//   lambda0 = ln[2(4+alpha)(N-2)(N-4)].
double lambda0(int dim, double alpha);

struct LogSample {
  double s = 0.0;   // ln r
  double w = 0.0;   // u + (4+alpha) s - offset
  double w1 = 0.0;  // dw/ds
  double w2 = 0.0;
  double w3 = 0.0;
};

// Trajectory in s = ln r coordinates. For N = 4 the offset is 0 and
// w = u + (4+alpha)s solves w'''' - 4w'' = e^w; for N >= 5 the offset is
// lambda0 and P_N(d/ds) w = e^{lambda0} (e^w - 1).
struct LogProfile {
  ProblemParams params;
  double offset = 0.0;  // lambda0 for N >= 5, 0 for N = 4
  std::vector<LogSample> samples;
};

// Chain-rule transform of a global profile; derivatives come from
// (u', Delta u, (Delta u)') exactly, never from differencing samples.
// N = 3 is unsupported (its expansion lives in r coordinates).
LogProfile to_log(const RadialProfile& prof);

}  // namespace henon
