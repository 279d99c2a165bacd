#include "henon/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace henon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double n_alpha(double alpha) {
  if (!(alpha > -2.0)) throw PreconditionError("alpha must exceed -2");
  auto f = [alpha](double s) {
    return s * s * (s - 4.0) - 32.0 * (4.0 + alpha) * (s - 2.0);
  };
  auto df = [alpha](double s) {
    return 3.0 * s * s - 8.0 * s - 32.0 * (4.0 + alpha);
  };
  double lo = 5.0, hi = 8.0;
  while (f(hi) < 0) hi *= 2.0;
  // bisect into the convex region, then Newton to machine accuracy
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) s -= f(s) / df(s);
  return s;
}

double hardy_weight(int dim, double r) {
  if (!(r > 0)) throw PreconditionError("hardy weight requires r > 0");
  if (dim == 4) {
    if (!(r > 1))
      throw PreconditionError("N = 4 weight is defined outside the unit ball");
    const double lg = std::log(r);
    return 1.0 / (4.0 * r * r * r * r * lg * lg);
  }
  const double n = dim;
  return n * n * (n - 4) * (n - 4) / (16.0 * r * r * r * r);
}

double hardy_margin(const RadialProfile& prof, double r_from) {
  const int n = prof.params.dim;
  const double a = prof.params.alpha;
  double worst = kInf;
  for (const RadialState& s : prof.samples) {
    if (s.r < r_from) continue;
    if (n == 4 && s.r <= 1.0) continue;
    const double w = hardy_weight(n, s.r);
    worst = std::min(worst, w - std::pow(s.r, a) * std::exp(s.u));
  }
  return worst;
}

double hardy_tail_radius(const RadialProfile& prof) {
  const int n = prof.params.dim;
  const double a = prof.params.alpha;
  const auto& ss = prof.samples;
  std::vector<double> margin(ss.size(), kInf);
  for (std::size_t i = 0; i < ss.size(); ++i) {
    if (n <= 4 && ss[i].r <= 1.0) continue;
    margin[i] =
        hardy_weight(n, ss[i].r) - std::pow(ss[i].r, a) * std::exp(ss[i].u);
  }
  double suffix = kInf;
  double best = kInf;
  for (std::size_t i = ss.size(); i-- > 0;) {
    suffix = std::min(suffix, margin[i]);
    // the certificate for N <= 4 lives outside the unit ball
    if (suffix >= 0 && (n >= 5 || ss[i].r > 1.0)) best = ss[i].r;
  }
  return best;
}

QnRoots qn_roots(int dim, double alpha) {
  if (dim < 5) throw PreconditionError("qn_roots requires N >= 5");
  if (!(alpha > -2.0)) throw PreconditionError("alpha must exceed -2");
  const double n = dim;
  const double elam = 2.0 * (4 + alpha) * (n - 2) * (n - 4);
  QnRoots out;
  out.nu_star = -(n - 4) / 2.0;
  const double p1 = out.nu_star * out.nu_star;            // nu*^2
  const double p2 = (out.nu_star - 2) * (out.nu_star - 2); // (nu*-2)^2
  const double s = p1 + p2;
  const double prod = p1 * p2 - elam;
  const double disc = s * s - 4.0 * prod;  // = (p1-p2)^2 + 4 e^{lambda0} > 0
  const double root = std::sqrt(disc);
  const double t_plus = 0.5 * (s + root);
  out.t_minus = 0.5 * (s - root);
  out.four_real = out.t_minus >= 0.0;
  auto pn = [n](double nu) {
    return nu * (nu - 2) * (nu + n - 2) * (nu + n - 4);
  };
  if (out.four_real) {
    const double sp = std::sqrt(t_plus), sm = std::sqrt(out.t_minus);
    out.nu1 = out.nu_star + sp;
    out.nu4 = out.nu_star - sp;
    out.nu2 = out.nu_star + sm;
    out.nu3 = out.nu_star - sm;
    for (double nu : {out.nu1, out.nu2, out.nu3, out.nu4})
      out.residual = std::max(out.residual, std::abs(pn(nu) - elam));
  } else {
    out.nu1 = out.nu_star + std::sqrt(t_plus);
    out.nu4 = out.nu_star - std::sqrt(t_plus);
    for (double nu : {out.nu1, out.nu4})
      out.residual = std::max(out.residual, std::abs(pn(nu) - elam));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic form discretization
// ---------------------------------------------------------------------------

namespace {

std::vector<double> make_grid(double r_a, double r_b, int n,
                              bool log_spacing) {
  std::vector<double> g(n);
  if (log_spacing) {
    const double la = std::log(r_a), lb = std::log(r_b);
    for (int i = 0; i < n; ++i)
      g[i] = std::exp(la + (lb - la) * i / (n - 1.0));
  } else {
    for (int i = 0; i < n; ++i) g[i] = r_a + (r_b - r_a) * i / (n - 1.0);
  }
  g.front() = r_a;
  g.back() = r_b;
  return g;
}

inline double power_cell(double lo, double hi, double p) {
  return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

struct Assembly {
  std::vector<double> nodes;
  int u_lo = 0, u_hi = 0;  // unknown node range, inclusive
  BandedSym a;
  std::vector<double> b;                  // r^{N-1} cells over unknowns
  std::vector<double> cell_lo, cell_hi;   // per-node cell bounds
  std::vector<double> trap_a;             // sampled-rule stiffness (diagnostic)
  int m() const { return u_hi - u_lo + 1; }
};

Assembly assemble(int dim, std::vector<double> nodes, EndCondition left,
                  EndCondition right) {
  const int n = static_cast<int>(nodes.size());
  Assembly as;
  as.nodes = std::move(nodes);
  as.u_lo = (left == EndCondition::kOrigin) ? 0 : 1;
  as.u_hi = n - 2;
  if (right == EndCondition::kOrigin)
    throw PreconditionError("origin condition applies to the left end only");
  const int m = as.m();
  as.a = BandedSym(m, 2);
  as.b.assign(m, 0.0);
  as.cell_lo.assign(n, 0.0);
  as.cell_hi.assign(n, 0.0);

  const auto& r = as.nodes;
  for (int i = 0; i < n; ++i) {
    as.cell_lo[i] = i == 0 ? r[0] : 0.5 * (r[i - 1] + r[i]);
    as.cell_hi[i] = i == n - 1 ? r[n - 1] : 0.5 * (r[i] + r[i + 1]);
  }
  const double pn = dim;
  for (int i = as.u_lo; i <= as.u_hi; ++i)
    as.b[i - as.u_lo] = power_cell(as.cell_lo[i], as.cell_hi[i], pn);

  auto col = [&](int node) { return node - as.u_lo; };
  auto in_range = [&](int node) {
    return node >= as.u_lo && node <= as.u_hi;
  };
  auto add_row = [&](double weight, std::initializer_list<std::pair<int, double>> entries) {
    for (auto [ni, ci] : entries) {
      if (!in_range(ni)) continue;
      for (auto [nj, cj] : entries) {
        if (!in_range(nj) || nj > ni) continue;
        as.a.add(col(ni), col(nj), weight * ci * cj);
      }
    }
  };

  // interior stencil rows
  for (int i = 1; i <= n - 2; ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    const double den = hm * hp * (hm + hp);
    const double s_m = 2 * hp / den, s_0 = -2 * (hm + hp) / den,
                 s_p = 2 * hm / den;
    const double f_m = -hp * hp / den, f_p = hm * hm / den,
                 f_0 = (hp * hp - hm * hm) / den;
    const double fr = (dim - 1) / r[i];
    const double w = power_cell(as.cell_lo[i], as.cell_hi[i], pn);
    add_row(w, {{i - 1, s_m + fr * f_m},
                {i, s_0 + fr * f_0},
                {i + 1, s_p + fr * f_p}});
  }
  // boundary rows
  const double w0 = power_cell(as.cell_lo[0], as.cell_hi[0], pn);
  const double h0 = r[1] - r[0];
  if (left == EndCondition::kOrigin) {
    // Delta phi(0) = 2N (phi_1 - phi_0)/h^2 under phi'(0) = phi'''(0) = 0
    add_row(w0, {{0, -2.0 * dim / (h0 * h0)}, {1, 2.0 * dim / (h0 * h0)}});
  } else if (left == EndCondition::kClamped) {
    // ghost reflection of phi' = 0 across the wall, phi(wall) = 0
    add_row(w0, {{1, 2.0 / (h0 * h0)}});
  }
  if (right == EndCondition::kClamped) {
    const double wn = power_cell(as.cell_lo[n - 1], as.cell_hi[n - 1], pn);
    const double hn = r[n - 1] - r[n - 2];
    add_row(wn, {{n - 2, 2.0 / (hn * hn)}});
  }
  return as;
}

// Rayleigh quotient upper bound from a generic bump over the unknowns.
double bump_quotient(const Assembly& as, const std::vector<double>& vdiag) {
  const int m = as.m();
  std::vector<double> x(m);
  for (int i = 0; i < m; ++i) {
    const double t = (i + 1.0) / (m + 1.0);
    x[i] = t * t * (1 - t) * (1 - t);
  }
  const auto ax = as.a.multiply(x);
  double num = 0, den = 0;
  for (int i = 0; i < m; ++i) {
    num += x[i] * ax[i] - vdiag[i] * x[i] * x[i];
    den += x[i] * x[i] * as.b[i];
  }
  return num / den;
}

struct SolveOut {
  double lambda;
  std::vector<double> r, phi;
  double q_value, q_independent;
};

SolveOut solve_form(int dim, const Assembly& as,
                    const std::vector<double>& vdiag) {
  const int m = as.m();
  BandedSym a2 = as.a;
  double vmax = 0;
  for (int i = 0; i < m; ++i) {
    a2.at(i, i) -= vdiag[i];
    vmax = std::max(vmax, vdiag[i] / as.b[i]);
  }
  const double hi = bump_quotient(as, vdiag) + 1.0;
  const double lo = -vmax - 1.0;
  GenEig eig = smallest_eig(a2, as.b, lo, hi, 1e-12);

  SolveOut out;
  out.lambda = eig.lambda;
  out.phi = std::move(eig.vec);
  out.r.resize(m);
  for (int i = 0; i < m; ++i) out.r[i] = as.nodes[as.u_lo + i];

  const auto ax = a2.multiply(out.phi);
  double num = 0, den = 0;
  for (int i = 0; i < m; ++i) {
    num += out.phi[i] * ax[i];
    den += out.phi[i] * out.phi[i] * as.b[i];
  }
  out.q_value = num / den;

  // Independent re-quadrature: sampled trapezoid weights r^{N-1} dr instead
  // of exact power cells, same stencil values.
  const int n = static_cast<int>(as.nodes.size());
  const auto& r = as.nodes;
  auto phi_at = [&](int node) -> double {
    return (node >= as.u_lo && node <= as.u_hi) ? out.phi[node - as.u_lo]
                                                : 0.0;
  };
  double qn = 0, qd = 0;
  for (int i = 1; i <= n - 2; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    const double den2 = hm * hp * (hm + hp);
    const double lap = (2 * hp * phi_at(i - 1) - 2 * (hm + hp) * phi_at(i) +
                        2 * hm * phi_at(i + 1)) /
                           den2 +
                       (dim - 1) / r[i] *
                           (-hp * hp * phi_at(i - 1) +
                            (hp * hp - hm * hm) * phi_at(i) +
                            hm * hm * phi_at(i + 1)) /
                           den2;
    const double tw = 0.5 * (hm + hp) * std::pow(r[i], dim - 1.0);
    qn += tw * lap * lap;
    if (i >= as.u_lo && i <= as.u_hi) {
      const double cw = as.b[i - as.u_lo];
      qn -= vdiag[i - as.u_lo] / cw * tw * phi_at(i) * phi_at(i);
      qd += tw * phi_at(i) * phi_at(i);
    }
  }
  out.q_independent = qn / std::max(qd, 1e-300);
  return out;
}

EigResult run_eig(int dim, double r_a, double r_b,
                  const std::function<double(double, double, double)>& vcell,
                  const EigOptions& opts) {
  if (opts.grid < 64) throw PreconditionError("grid_size must be >= 64");
  if (!(r_a >= 0) || !(r_b > r_a))
    throw PreconditionError("invalid eigenvalue domain");
  const EndCondition left =
      r_a > 0 ? EndCondition::kClamped : EndCondition::kOrigin;
  auto build = [&](int n) {
    Assembly as =
        assemble(dim, make_grid(r_a, r_b, n, opts.log_spacing), left,
                 EndCondition::kClamped);
    std::vector<double> v(as.m());
    for (int i = 0; i < as.m(); ++i) {
      const int node = as.u_lo + i;
      v[i] = vcell(as.nodes[node], as.cell_lo[node], as.cell_hi[node]);
    }
    return std::make_pair(std::move(as), std::move(v));
  };
  auto [as, v] = build(opts.grid);
  SolveOut s = solve_form(dim, as, v);
  EigResult out;
  out.lambda = s.lambda;
  out.r = std::move(s.r);
  out.phi = std::move(s.phi);
  out.q_value = s.q_value;
  out.q_independent = s.q_independent;
  out.refined_lambda = s.lambda;
  if (opts.refine_check) {
    auto [as2, v2] = build(2 * opts.grid);
    SolveOut s2 = solve_form(dim, as2, v2);
    out.refined_lambda = s2.lambda;
    const double denom = std::max(
        {std::abs(s.lambda), std::abs(s2.lambda), 1e-8});
    out.converged = std::abs(s2.lambda - s.lambda) / denom <= 0.10;
  }
  return out;
}

}  // namespace

EigResult min_eig_potential(int dim, double r_a, double r_b,
                            const std::function<double(double)>& potential,
                            const EigOptions& opts) {
  const double pn = dim;
  return run_eig(
      dim, r_a, r_b,
      [&](double r, double clo, double chi) {
        return potential(r) * power_cell(clo, chi, pn);
      },
      opts);
}

EigResult min_eig(const RadialProfile& prof, double r_a, double r_b,
                  const EigOptions& opts) {
  if (r_b > prof.r_last() * (1 + 1e-9))
    throw PreconditionError("eigenvalue domain exceeds the profile range");
  const double pa = prof.params.dim + prof.params.alpha;
  return run_eig(
      prof.params.dim, r_a, r_b,
      [&](double r, double clo, double chi) {
        const double rr = std::clamp(r, prof.r_first(), prof.r_last());
        return std::exp(prof.u_at(rr)) * power_cell(clo, chi, pa);
      },
      opts);
}

double log_bound_constant(int dim, double alpha, int grid) {
  if (dim < 3) throw PreconditionError("log bound requires N >= 3");
  Assembly as = assemble(dim, make_grid(0.0, 1.0, grid, false),
                         EndCondition::kOrigin, EndCondition::kHinged);
  // generalized problem against the |x|^alpha mass
  std::vector<double> mass(as.m());
  const double pa = dim + alpha;
  for (int i = 0; i < as.m(); ++i) {
    const int node = as.u_lo + i;
    mass[i] = power_cell(as.cell_lo[node], as.cell_hi[node], pa);
  }
  std::vector<double> zero(as.m(), 0.0);
  const double hi = [&] {
    const int m = as.m();
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) {
      const double t = (i + 1.0) / (m + 1.0);
      x[i] = 1 - t * t;  // hinged-compatible bump, nonzero at the origin
    }
    const auto ax = as.a.multiply(x);
    double num = 0, den = 0;
    for (int i = 0; i < m; ++i) {
      num += x[i] * ax[i];
      den += x[i] * x[i] * mass[i];
    }
    return num / den + 1.0;
  }();
  GenEig eig = smallest_eig(as.a, mass, 0.0, hi, 1e-12);
  if (!(eig.lambda > 0))
    throw InconclusiveError("weighted Navier eigenvalue came out nonpositive");
  return std::log(eig.lambda);
}

double beta_prime(int dim, double alpha, double beta0) {
  const double n = dim;
  const double k = std::log(n * n * (n - 4) * (n - 4) / 16.0);
  const double t_star = k / (4 + alpha) + 0.5;
  return beta0 - n * (4 + alpha) * std::exp(-2.0 * t_star);
}

StabilityReport classify_stability(const RadialProfile& prof,
                                   const EigOptions& opts) {
  if (!prof.global())
    throw PreconditionError("stability classification needs a global profile");
  const int n = prof.params.dim;
  StabilityReport rep;
  rep.hardy_margin_global =
      n <= 4 ? -kInf : hardy_margin(prof, prof.r_first());
  rep.tail_radius = hardy_tail_radius(prof);
  rep.hardy_margin_tail = std::isfinite(rep.tail_radius)
                              ? hardy_margin(prof, rep.tail_radius)
                              : hardy_margin(prof, prof.r_last() / 10.0);

  auto attach_witness = [&](const EigResult& e) {
    rep.min_eig_value = e.lambda;
    rep.eig_converged = e.converged;
    if (e.lambda < 0 && e.q_independent < 0) {
      rep.has_witness = true;
      rep.witness_r = e.r;
      rep.witness_phi = e.phi;
      rep.witness_q_independent = e.q_independent;
    }
  };

  if (rep.hardy_margin_global >= 0) {
    rep.classification = StabilityClass::kStable;
    rep.certificate = "hardy-global";
    EigOptions quick = opts;
    quick.refine_check = false;
    rep.eig_domain_lo = 0;
    rep.eig_domain_hi = std::min(100.0, prof.r_last() / 2);
    attach_witness(min_eig(prof, rep.eig_domain_lo, rep.eig_domain_hi, quick));
    return rep;
  }

  if (std::isfinite(rep.tail_radius)) {
    rep.eig_domain_lo = 0;
    rep.eig_domain_hi = std::min(2.0 * rep.tail_radius, 0.9 * prof.r_last());
    EigResult e = min_eig(prof, rep.eig_domain_lo, rep.eig_domain_hi, opts);
    attach_witness(e);
    if (e.lambda >= -1e-8) {
      rep.classification = StabilityClass::kStable;
      rep.certificate = "eig+tail";
    } else {
      rep.classification = StabilityClass::kStableAtInfinity;
      rep.certificate = "tail";
    }
    return rep;
  }

  rep.classification = StabilityClass::kUnstableAtInfinity;
  rep.certificate = "annulus-witness";
  EigOptions annulus = opts;
  annulus.log_spacing = true;
  for (double frac : {1.0 / 256, 1.0 / 64, 1.0 / 16, 1.0 / 4}) {
    const double ra = std::max(prof.r_last() * frac, 4 * prof.r_first());
    EigResult e = min_eig(prof, ra, 4 * ra, annulus);
    rep.eig_domain_lo = ra;
    rep.eig_domain_hi = 4 * ra;
    attach_witness(e);
    if (e.lambda < -1e-8) break;
  }
  return rep;
}

Beta1Result find_beta1(const ProblemParams& params_template, double beta0,
                       const Beta1Options& opts) {
  ProblemParams base = params_template;
  base.validate();
  const int n = base.dim;
  if (n < 5 || n >= n_alpha(base.alpha))
    throw PreconditionError(
        "beta1 applies to 5 <= N < N_alpha only (not applicable here)");

  auto stable_test = [&](double beta) -> std::pair<bool, std::string> {
    ProblemParams p = base;
    p.beta = beta;
    RadialProfile prof = integrate(p, opts.r_max, opts.integ);
    if (!prof.global())
      throw PreconditionError("beta sample above beta0 in find_beta1");
    if (hardy_margin(prof, prof.r_first()) >= 0)
      return {true, "hardy-global"};
    const double rt = hardy_tail_radius(prof);
    if (!std::isfinite(rt)) return {false, "no-tail"};
    EigResult e =
        min_eig(prof, 0.0, std::min(2.0 * rt, 0.9 * prof.r_last()), opts.eig);
    if (e.lambda >= -1e-8) return {true, "eig+tail"};
    return {false, "eig"};
  };

  Beta1Result out;
  out.beta_prime_start = beta_prime(n, base.alpha, beta0);

  double lo = out.beta_prime_start;
  std::string lo_cert;
  bool ok = false;
  for (int k = 0; k < 6; ++k) {
    auto [st, cert] = stable_test(lo);
    if (st) {
      ok = true;
      lo_cert = cert;
      break;
    }
    lo = beta0 - 2.0 * (beta0 - lo);
  }
  if (!ok)
    throw InconclusiveError("no stable starting point found below beta_prime");

  double hi = beta0 - 1e-6 * std::abs(beta0);
  auto [hi_stable, hi_cert] = stable_test(hi);
  if (hi_stable)
    throw InconclusiveError(
        "trajectory just below beta0 classified stable; certificates disagree");

  const double tol = opts.tol_rel * std::abs(beta0);
  int iters = 0;
  while (hi - lo > tol && iters < 80) {
    const double mid = 0.5 * (lo + hi);
    auto [st, cert] = stable_test(mid);
    if (st) {
      lo = mid;
      lo_cert = cert;
    } else {
      hi = mid;
      hi_cert = cert;
    }
    ++iters;
  }
  out.beta1 = 0.5 * (lo + hi);
  out.lo = lo;
  out.hi = hi;
  out.iterations = iters;
  out.lo_certificate = lo_cert;
  out.hi_certificate = hi_cert;

  // Hardy-only boundary (global margin flip), for the certificate gap.
  double hlo = out.beta_prime_start, hhi = beta0 - 1e-6 * std::abs(beta0);
  auto hardy_ok = [&](double beta) {
    ProblemParams p = base;
    p.beta = beta;
    RadialProfile prof = integrate(p, opts.r_max, opts.integ);
    return hardy_margin(prof, prof.r_first()) >= 0;
  };
  if (!hardy_ok(hlo)) {
    out.beta1_hardy = hlo;  // margin never fires on this grid
  } else {
    while (hhi - hlo > tol) hardy_ok(0.5 * (hlo + hhi)) ? hlo = 0.5 * (hlo + hhi)
                                                        : hhi = 0.5 * (hlo + hhi);
    out.beta1_hardy = 0.5 * (hlo + hhi);
  }
  out.certificate_gap = out.beta1 - out.beta1_hardy;
  return out;
}

}  // namespace henon
