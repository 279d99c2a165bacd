#include "henon/log_coords.hpp"

#include <cmath>

namespace henon {

double lambda0(int dim, double alpha) {
  if (dim <= 4) throw PreconditionError("lambda0 is defined for N >= 5");
  if (!(alpha > -2.0)) throw PreconditionError("alpha must exceed -2");
  const double n = dim;
  return std::log(2.0 * (4 + alpha) * (n - 2) * (n - 4));
}

LogProfile to_log(const RadialProfile& prof) {
  const int n = prof.params.dim;
  if (n == 3)
    throw PreconditionError(
        "log coordinates unsupported for N = 3 (expansion is polynomial in r)");
  if (n < 3) throw PreconditionError("log coordinates require N >= 4");
  if (!prof.global())
    throw PreconditionError("log transform requires a global profile");

  LogProfile out;
  out.params = prof.params;
  out.offset = n >= 5 ? lambda0(n, prof.params.alpha) : 0.0;

  const double a = prof.params.alpha;
  const double n1 = n - 1;
  out.samples.reserve(prof.samples.size());
  for (const RadialState& st : prof.samples) {
    const double r = st.r;
    const double u2 = st.lap - n1 * st.du / r;              // u''
    const double u3 = st.dlap - n1 * (u2 / r - st.du / (r * r));  // u'''
    LogSample ls;
    ls.s = std::log(r);
    ls.w = st.u + (4 + a) * ls.s - out.offset;
    ls.w1 = r * st.du + (4 + a);
    ls.w2 = r * st.du + r * r * u2;
    ls.w3 = r * st.du + 3 * r * r * u2 + r * r * r * u3;
    out.samples.push_back(ls);
  }
  return out;
}

}  // namespace henon
