#include "henon/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "henon/log_coords.hpp"

namespace henon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Max over [r0, inf) of a log-expression c + alpha ln r - eps r^2 + m ln(1+r^b)
// style profile, by a log-spaced scan out to where the Gaussian term freezes
// everything. Used to verify supersolution differential inequalities.
template <class F>
double log_scan_max(F&& phi, double r0, double eps, double scale_guess) {
  double r_hi = r0;
  // past this radius eps r^2 dominates every logarithmic term
  const double cap = (scale_guess + 200.0) / eps;
  r_hi = std::max(4.0 * r0, std::sqrt(std::max(cap, r0 * r0)));
  double worst = -kInf;
  const int n = 600;
  const double lf = std::log(r_hi / r0) / n;
  for (int i = 0; i <= n; ++i)
    worst = std::max(worst, phi(r0 * std::exp(lf * i)));
  return worst;
}

// Supersolution c - eps r^2 - A ln(1+r^2) for N >= 4, ordered against the
// trajectory data at the anchor; differential inequality checked against the
// weakest term 96 A / (1+r^2)^4 of its bilaplacian.
bool certificate_n4(const RadialProfile& prof, double r0) {
  const int n = prof.params.dim;
  const double a = prof.params.alpha;
  const RadialState s = prof.at(r0);
  if (!(s.lap < 0) || !(s.dlap >= 0)) return false;
  const double w2 = 1 + r0 * r0;
  const double gq = 4.0 * (n - 2) * r0 / (w2 * w2) + 16.0 * r0 / (w2 * w2 * w2);
  const double A = std::max(1.25 * s.dlap / gq, 1e-8);
  const double gv = 2.0 * (n - 2) / w2 + 4.0 / (w2 * w2);
  const double room = -s.lap - A * gv;
  if (!(room > 0)) return false;
  const double eps = 0.9 * room / (2 * n);
  if (!(-2 * eps * r0 - 2 * A * r0 / w2 >= s.du)) return false;
  const double c = s.u + eps * r0 * r0 + A * std::log(w2);
  auto phi = [&](double r) {
    return a * std::log(r) + c - eps * r * r +
           (4.0 - A) * std::log(1 + r * r) - std::log(96.0 * A);
  };
  const double guess = std::abs(c) + (std::abs(a) + std::abs(4 - A)) * 60.0;
  return log_scan_max(phi, r0, eps, guess) <= -0.01;
}

// N = 3 variant in the (u, u', u'', u''') chart where the radial bilaplacian
// is r^{-4} (r^4 u''')'; supersolution c - eps r^2 + A ln(1+r).
bool certificate_n3(const RadialProfile& prof, double r0) {
  const double a = prof.params.alpha;
  const RadialState s = prof.at(r0);
  const double u2 = s.lap - 2.0 * s.du / r0;
  const double u3 = s.dlap - 2.0 * (u2 / r0 - s.du / (r0 * r0));
  const double w1 = 1 + r0;
  double A = 1.0;
  if (u3 > 0) A = std::max(A, 1.25 * u3 * w1 * w1 * w1 / 2.0);
  const double room = -u2 - A / (w1 * w1);
  if (!(room > 0)) return false;
  const double eps = 0.45 * room;
  if (!(-2 * eps * r0 + A / w1 >= s.du)) return false;
  const double c = s.u + eps * r0 * r0 - A * std::log(w1);
  auto phi = [&](double r) {
    return a * std::log(r) + c - eps * r * r + (A + 4) * std::log(1 + r) -
           std::log(2.0 * A);
  };
  const double guess = std::abs(c) + (std::abs(a) + A + 4) * 60.0;
  return log_scan_max(phi, r0, eps, guess) <= -0.01;
}

}  // namespace

TrajectoryClass classify(const RadialProfile& prof) {
  if (prof.status.threshold_hit || prof.status.lap_crossed)
    return TrajectoryClass::kBlowUp;
  const double margin = 1e-4 * std::abs(prof.params.beta);
  const double v_end = prof.samples.back().lap;
  if (v_end <= -margin) return TrajectoryClass::kGlobal;
  return TrajectoryClass::kUndecided;
}

bool supersolution_certificate(const RadialProfile& prof) {
  if (prof.status.threshold_hit || prof.status.lap_crossed) return false;
  const double r_end = prof.r_last();
  for (double frac : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    const double r0 = r_end * frac;
    if (r0 <= 4 * prof.r_first()) break;
    const bool ok = prof.params.dim == 3 ? certificate_n3(prof, r0)
                                         : certificate_n4(prof, r0);
    if (ok) return true;
  }
  return false;
}

namespace {

struct Resolved {
  TrajectoryClass cls;
  RadialProfile prof;
  std::string cert;
};

// Side discriminator for N = 3, where Delta u deviations stay bounded and the
// margin rule alone can certify a not-yet-crossed blow-up as global. On the
// separatrix m(r) = -r Delta u is flat (= the total mass) once the forcing
// has died; off it, m drifts linearly with slope proportional to beta-beta0:
// down on the blow-up side, up on the global side.
// Returns +1 (blow-up side), -1 (global side), 0 (below resolution).
int slope_side_n3(const RadialProfile& prof) {
  const double r2 = prof.r_last();
  const double r1 = std::max(0.25 * r2, 16 * prof.r_first());
  if (r1 >= 0.5 * r2) return 0;
  const double m1 = -prof.at(r1).lap * r1;
  const double m2 = -prof.samples.back().lap * r2;
  const double theta = 1e-7 * std::max(1.0, std::abs(m1));
  if (m2 - m1 < -theta) return +1;
  if (m2 - m1 > theta) return -1;
  return 0;
}

Resolved resolve_class(const ProblemParams& base, double beta, double& r_cur,
                       const ShootOptions& opts) {
  ProblemParams p = base;
  p.beta = beta;
  for (;;) {
    RadialProfile prof = integrate(p, r_cur, opts.integ);
    const TrajectoryClass cls = classify(prof);
    if (cls == TrajectoryClass::kBlowUp)
      return {cls, std::move(prof), "crossing"};
    if (cls == TrajectoryClass::kGlobal) {
      if (base.dim == 3 && slope_side_n3(prof) > 0)
        return {TrajectoryClass::kBlowUp, std::move(prof), "mass-drift"};
      return {cls, std::move(prof), "margin"};
    }
    if (r_cur < opts.r_max_cap) {
      r_cur = std::min(2.0 * r_cur, opts.r_max_cap);
      continue;
    }
    if (supersolution_certificate(prof))
      return {TrajectoryClass::kGlobal, std::move(prof), "supersolution"};
    if (opts.allow_survival_heuristic)
      return {TrajectoryClass::kGlobal, std::move(prof), "survived-cap"};
    throw InconclusiveBracket(
        "trajectory undecided at the r_max cap (beta = " +
        std::to_string(beta) + ")");
  }
}

}  // namespace

ShootResult find_beta0(const ProblemParams& params_template,
                       const ShootOptions& opts) {
  ProblemParams base = params_template;
  base.beta = 0.0;
  base.validate();
  if (base.dim <= 2)
    throw NoEntireSolution(
        "no entire solution exists for N <= 2; shooting refused");

  ShootResult res;
  res.params = base;
  double r_cur = opts.r_max;

  auto record = [&res](double beta, TrajectoryClass c) {
    res.history.emplace_back(beta, c);
  };

  // beta = 0 is on the blow-up side (beta0 < 0).
  Resolved high = resolve_class(base, 0.0, r_cur, opts);
  if (high.cls != TrajectoryClass::kBlowUp)
    throw InconclusiveBracket("beta = 0 did not classify as blow-up");
  record(0.0, high.cls);
  double beta_high = 0.0;

  double beta_low = -1.0;
  Resolved low = resolve_class(base, beta_low, r_cur, opts);
  record(beta_low, low.cls);
  int guard = 0;
  while (low.cls != TrajectoryClass::kGlobal) {
    beta_high = beta_low;
    high = std::move(low);
    beta_low *= 2.0;
    if (++guard > 80)
      throw InconclusiveBracket("downward bracket search exhausted");
    low = resolve_class(base, beta_low, r_cur, opts);
    record(beta_low, low.cls);
  }

  auto tol = [&](double bl) {
    return opts.tol_beta > 0 ? opts.tol_beta
                             : opts.tol_beta_rel * std::max(1.0, std::abs(bl));
  };
  int iters = 0;
  while (beta_high - beta_low > tol(beta_low)) {
    const double mid = 0.5 * (beta_low + beta_high);
    if (mid <= beta_low || mid >= beta_high) break;  // machine limit
    Resolved r = resolve_class(base, mid, r_cur, opts);
    record(mid, r.cls);
    if (r.cls == TrajectoryClass::kBlowUp) {
      beta_high = mid;
      high = std::move(r);
    } else {
      beta_low = mid;
      low = std::move(r);
    }
    ++iters;
  }

  res.beta0 = 0.5 * (beta_low + beta_high);
  res.beta_low = beta_low;
  res.beta_high = beta_high;
  res.iterations = iters;
  res.r_max_used = r_cur;
  res.low_certificate = low.cert;
  res.heuristic_used = (low.cert == "survived-cap");
  res.global_witness = std::move(low.prof);
  res.blowup_witness = std::move(high.prof);
  return res;
}

namespace {

// Departure side of a near-separatrix trajectory: +1 above (blow-up side),
// -1 below (global side), 0 indistinguishable. Also reports the trigger
// radius (or the last faithful radius for side 0).
struct Departure {
  int side = 0;
  double r = 0.0;
};

Departure departure_side(const RadialProfile& prof, double r_gate) {
  const int n = prof.params.dim;
  const double a = prof.params.alpha;
  Departure dep;
  if (prof.status.lap_crossed || prof.status.threshold_hit) {
    dep.side = +1;
    dep.r = prof.status.lap_crossed ? prof.status.lap_cross_r
                                    : prof.status.r_reached;
    return dep;
  }
  if (n >= 5) {
    const double lam = lambda0(n, a);
    for (const RadialState& s : prof.samples) {
      if (s.r < r_gate) continue;
      const double w = s.u + (4 + a) * std::log(s.r) - lam;
      const double w1 = s.r * s.du + (4 + a);
      if (w < -1.0 && w1 < 0) return {-1, s.r};
    }
  } else if (n == 4) {
    const double level = -6.0 * 2.0 * (8 + 2 * a);
    for (const RadialState& s : prof.samples) {
      if (s.r < r_gate) continue;
      if (s.lap * s.r * s.r < level) return {-1, s.r};
    }
  } else {  // n == 3: mass-drift slope rule
    const int side = slope_side_n3(prof);
    if (side != 0) return {side, prof.r_last()};
  }
  return {0, prof.r_last()};
}

}  // namespace

Separatrix compute_separatrix(const ProblemParams& params_template,
                              const ShootOptions& shoot_opts,
                              const SeparatrixOptions& sep_opts) {
  Separatrix sep;
  sep.shoot = find_beta0(params_template, shoot_opts);
  ProblemParams base = sep.shoot.params;

  double lo = sep.shoot.beta_low;
  double hi = sep.shoot.beta_high;
  double r_probe = std::max(sep_opts.r_probe, 4 * sep_opts.r_gate);
  double best_indet = std::numeric_limits<double>::quiet_NaN();

  auto width_floor = [&] {
    const double ulp =
        std::nextafter(std::max(std::abs(lo), std::abs(hi)), kInf) -
        std::max(std::abs(lo), std::abs(hi));
    return std::max(sep_opts.tol_beta_abs, 8.0 * ulp);
  };

  int it = 0;
  while (it < sep_opts.max_iterations && hi - lo > width_floor()) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ProblemParams p = base;
    p.beta = mid;
    RadialProfile prof = integrate(p, r_probe, sep_opts.integ);
    const Departure dep = departure_side(prof, sep_opts.r_gate);
    ++it;
    if (dep.side > 0) {
      hi = mid;
    } else if (dep.side < 0) {
      lo = mid;
    } else {
      best_indet = mid;
      if (r_probe < sep_opts.r_probe_cap) {
        r_probe = std::min(4.0 * r_probe, sep_opts.r_probe_cap);
      } else {
        break;  // indistinguishable from the separatrix at the probe cap
      }
    }
  }

  sep.refine_iterations = it;
  sep.bracket_low = lo;
  sep.bracket_high = hi;
  sep.beta0 = std::isnan(best_indet) ? 0.5 * (lo + hi) : best_indet;

  // Profile: prefer the refined estimate, fall back to the certified global
  // side if it blows up or departs before the target radius.
  auto probe_profile = [&](double beta) {
    ProblemParams p = base;
    p.beta = beta;
    RadialProfile prof = integrate(p, sep_opts.r_target, sep_opts.integ);
    const Departure dep = departure_side(prof, sep_opts.r_gate);
    const double faithful = dep.side == 0 ? prof.r_last() : dep.r;
    return std::make_pair(std::move(prof), faithful);
  };
  auto [prof_mid, faith_mid] = probe_profile(sep.beta0);
  if (faith_mid >= sep_opts.r_target * (1 - 1e-9)) {
    sep.profile = std::move(prof_mid);
    sep.faithful_r = faith_mid;
    sep.notes = "refined-midpoint";
  } else {
    auto [prof_lo, faith_lo] = probe_profile(lo);
    if (faith_lo >= faith_mid) {
      sep.profile = std::move(prof_lo);
      sep.faithful_r = faith_lo;
      sep.beta0 = lo;
      sep.notes = "global-endpoint";
    } else {
      sep.profile = std::move(prof_mid);
      sep.faithful_r = faith_mid;
      sep.notes = "refined-midpoint-short";
    }
  }
  return sep;
}

double BoundsReport::worst() const {
  return std::min(std::min(margin_lower_quadratic, margin_upper_quadratic),
                  std::min(margin_log, margin_pointwise_mass));
}

BoundsReport verify_bounds(const RadialProfile& prof, double beta0,
                           double c_log) {
  if (!prof.global())
    throw PreconditionError("bounds are asserted along global profiles only");
  const double n = prof.params.dim;
  const double a = prof.params.alpha;
  const double beta = prof.params.beta;
  if (beta > beta0 + 1e-9 * std::max(1.0, std::abs(beta0)))
    throw PreconditionError("bounds require beta <= beta0");

  BoundsReport rep;
  rep.c_log = c_log;
  rep.margin_lower_quadratic = kInf;
  rep.margin_upper_quadratic = kInf;
  rep.margin_log = kInf;
  rep.margin_pointwise_mass = kInf;
  const double mass_cap = -beta0 * (2 + a) * (n + a);
  for (const RadialState& s : prof.samples) {
    const double quad = beta * s.r * s.r / (2 * n);
    rep.margin_lower_quadratic =
        std::min(rep.margin_lower_quadratic, s.u - quad);
    const double upper = -(beta0 - beta) * s.r * s.r / (2 * n);
    rep.margin_upper_quadratic =
        std::min(rep.margin_upper_quadratic, upper - s.u);
    rep.margin_log = std::min(
        rep.margin_log, c_log - (4 + a) * std::log(s.r) - s.u);
    const double mass = std::pow(s.r, 2 + a) * std::exp(s.u);
    rep.margin_pointwise_mass =
        std::min(rep.margin_pointwise_mass, mass_cap - mass);
  }
  return rep;
}

}  // namespace henon
