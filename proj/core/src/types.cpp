#include "henon/types.hpp"

#include <cmath>
#include <cstdio>

namespace henon {

void ProblemParams::validate() const {
  if (dim < 2)
    throw PreconditionError("dim must be >= 2 for the fourth-order problem");
  if (!(alpha > -2.0))
    throw PreconditionError("alpha <= -2: the problem admits no solutions");
  if (!std::isfinite(delta) || !std::isfinite(beta))
    throw PreconditionError("initial data must be finite");
}

void SecondOrderParams::validate() const {
  if (dim < 2)
    throw PreconditionError("dim must be >= 2");
  if (!(alpha > -2.0))
    throw PreconditionError("alpha <= -2: the problem admits no solutions");
  if (!std::isfinite(u0)) throw PreconditionError("u0 must be finite");
}

std::string cell_key(int dim, double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "N%d_a%.6g", dim, alpha);
  return buf;
}

}  // namespace henon
