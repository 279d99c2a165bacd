#include "henon/quadrature.hpp"

#include <cmath>
#include <limits>

namespace henon {

namespace {

inline double integrand(double r, double ka, bool log_factor, double u) {
  double f = std::pow(r, ka) * std::exp(u);
  if (log_factor) f *= std::log(r);
  return f;
}

// Closed-form head over (0, r_start) from the leading series term e^delta r^k.
double moment_head(const RadialProfile& prof, double k, bool log_factor) {
  const double a = prof.params.alpha;
  const double rs = prof.opts.r_start;
  const double m = k + a + 1;
  const double base = std::exp(prof.params.delta) * std::pow(rs, m) / m;
  return log_factor ? base * (std::log(rs) - 1.0 / m) : base;
}

// Simpson over one checkpoint interval using the Hermite model of u.
double interval_simpson(const RadialState& s0,
                        const RadialState& s1, double ka, bool log_factor,
                        int subdiv) {
  // keep Simpson panels at or below ~1% of the local radius
  const int widen =
      static_cast<int>(std::ceil((s1.r - s0.r) / (0.01 * s0.r)));
  subdiv = std::min(subdiv * std::max(1, widen), 256);
  double total = 0.0;
  double a = s0.r;
  const double h = (s1.r - s0.r) / subdiv;
  for (int j = 0; j < subdiv; ++j) {
    const double b = (j == subdiv - 1) ? s1.r : a + h;
    const double m = 0.5 * (a + b);
    const double ua = hermite(s0.r, s0.u, s0.du, s1.r, s1.u, s1.du, a);
    const double ub = hermite(s0.r, s0.u, s0.du, s1.r, s1.u, s1.du, b);
    const double um = hermite(s0.r, s0.u, s0.du, s1.r, s1.u, s1.du, m);
    total += (b - a) / 6.0 *
             (integrand(a, ka, log_factor, ua) +
              4.0 * integrand(m, ka, log_factor, um) +
              integrand(b, ka, log_factor, ub));
    a = b;
  }
  return total;
}

}  // namespace

double profile_moment(const RadialProfile& prof, double k, bool log_factor,
                      int subdiv) {
  const double ka = k + prof.params.alpha;
  double total = moment_head(prof, k, log_factor);
  for (std::size_t i = 1; i < prof.samples.size(); ++i)
    total += interval_simpson(prof.samples[i - 1], prof.samples[i], ka,
                              log_factor, subdiv);
  return total;
}

double moment_tail_bound_exp(const RadialProfile& prof, double k) {
  const RadialState& e = prof.samples.back();
  const double ka = k + prof.params.alpha;
  const double n1 = prof.params.dim - 1;
  const double u2 = e.lap - n1 * e.du / e.r;
  const double mu = -e.du;
  if (!(u2 < 0) || !(mu > 0) || !(mu > ka / e.r))
    return std::numeric_limits<double>::infinity();
  return std::exp(e.u) * std::pow(e.r, ka) / (mu - ka / e.r);
}

double moment_tail_bound_power(const RadialProfile& prof, double k,
                               bool log_factor) {
  const RadialState& e = prof.samples.back();
  const double ka = k + prof.params.alpha;
  const double c = -e.r * e.du;  // local log-slope of e^u
  const double m = c - ka - 1;
  if (!(m > 0)) return std::numeric_limits<double>::infinity();
  const double base = std::exp(e.u) * std::pow(e.r, ka + 1);
  if (!log_factor) return base / m;
  return base * (std::log(e.r) / m + 1.0 / (m * m));
}

double quadrature_identity_defect(const RadialProfile& prof) {
  const double n = prof.params.dim;
  const double k = n - 1;  // moment power: s^{N-1+alpha}
  const double ka = k + prof.params.alpha;
  double acc = 0.0;
  {
    const double rs = prof.opts.r_start;
    const double m = ka + 1;
    acc = std::exp(prof.params.delta) * std::pow(rs, m) / m;
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < prof.samples.size(); ++i) {
    acc += interval_simpson(prof.samples[i - 1], prof.samples[i], ka,
                            false, 2);
    const RadialState& s = prof.samples[i];
    const double lhs = s.dlap * std::pow(s.r, n - 1);
    const double rel = std::abs(lhs - acc) / std::max(std::abs(lhs), 1e-300);
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace henon
